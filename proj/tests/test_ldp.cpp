#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "phi4/ldp.hpp"
#include "phi4/sampler.hpp"

using namespace phi4;

namespace {

RenormSchedule make_schedule(double g, double m, double a) {
  RenormSchedule s;
  s.g = CoeffSequence::constant(g);
  s.m = CoeffSequence::constant(m);
  s.a = CoeffSequence::constant(a);
  return s;
}

struct Setup {
  Grid grid;
  Spectrum spec;
  MollifierKernel kern;
  ActionContext ctx;
  Setup(int d, int N, double L, int n, const RenormSchedule& s)
      : grid(d, N, L), spec(grid), kern(grid, spec, n), ctx(spec, kern, s) {}
};

std::vector<double> theta_range(double lo, double hi, double step) {
  std::vector<double> out;
  for (double t = lo; t <= hi + 1e-12; t += step) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("log moment generating function") {
  std::vector<double> constant(500, 1.3);
  auto table = empirical_logmgf(constant, theta_range(-2.0, 2.0, 0.25));
  for (std::size_t i = 0; i < table.theta_grid.size(); ++i)
    CHECK(table.logmgf[i] == doctest::Approx(1.3 * table.theta_grid[i]).epsilon(1e-12));

  GaussianRng rng(12);
  std::vector<double> normals(120000);
  for (auto& v : normals) v = rng.normal();
  auto nt = empirical_logmgf(normals, theta_range(-2.0, 2.0, 0.1));
  for (std::size_t i = 0; i < nt.theta_grid.size(); ++i) {
    double th = nt.theta_grid[i];
    CHECK(std::fabs(nt.logmgf[i] - 0.5 * th * th) <= 0.08);
    if (th == 0.0) CHECK(nt.logmgf[i] == 0.0);
  }
  CHECK(is_convex(nt.theta_grid, nt.logmgf));
}

TEST_CASE("legendre-fenchel transform") {
  // Lambda(theta) = theta * c conjugates to 0 at c and grows away from it
  std::vector<double> constant(500, 0.8);
  auto table = empirical_logmgf(constant, theta_range(-4.0, 4.0, 0.05));
  legendre_fenchel(table, {-0.2, 0.8, 1.8});
  CHECK(table.transform[0] == doctest::Approx(4.0 * 1.0).epsilon(1e-6));
  CHECK(table.transform[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(table.transform[2] == doctest::Approx(4.0 * 1.0).epsilon(1e-6));
  CHECK(is_convex(table.y_grid, table.transform, 1e-6));
  CHECK(table.argmax_theta.size() == 3);
}

TEST_CASE("tilted means approach the maximum") {
  GaussianRng rng(13);
  std::vector<double> uniforms(10000);
  for (auto& v : uniforms) v = rng.uniform();
  double mx = *std::max_element(uniforms.begin(), uniforms.end());
  double mean = 0.0;
  for (double v : uniforms) mean += v;
  mean /= static_cast<double>(uniforms.size());

  CHECK(tilted_mean(uniforms, 0.0) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(std::fabs(tilted_mean(uniforms, 1000.0) - mx) <= 1e-2);
  CHECK(std::fabs(tilted_functional_mean(uniforms, [](double y) { return y * y; }, 1000.0) -
                  1.0) <= 2e-2);
  CHECK(tilted_functional_mean(uniforms, [](double) { return 4.2; }, 50.0) ==
        doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("convexity detector") {
  std::vector<double> xs = {0.0, 1.0, 2.0, 3.0};
  CHECK(is_convex(xs, {0.0, 1.0, 4.0, 9.0}));
  CHECK(!is_convex(xs, {0.0, 2.0, 2.5, 2.6}));
}

TEST_CASE("classical minimizers") {
  auto m0 = classical_minimizer(0.0);
  REQUIRE(m0.size() == 2);
  CHECK(std::fabs(m0[0]) == doctest::Approx(std::sqrt(3.0)));
  auto m2 = classical_minimizer(2.0);
  CHECK(std::fabs(m2[0]) == doctest::Approx(std::sqrt(2.0)));
  auto m6 = classical_minimizer(6.0);
  REQUIRE(m6.size() == 1);
  CHECK(m6[0] == 0.0);
  CHECK(classical_minimizer(7.0).size() == 1);

  CHECK(classical_constant_minimum(1.0, 0.0, 0.0, 2.0) == doctest::Approx(-12.0));
  // alpha >= 6: the constant minimizer is 0, value (3 lambda - alpha - beta) V
  CHECK(classical_constant_minimum(1.0, 6.0, 0.0, 1.0) == doctest::Approx(3.0 - 6.0));
}

TEST_CASE("oscillation decomposition") {
  Grid g(2, 8, 1.0);
  Field flat = constant_field(g, std::sqrt(3.0));
  auto d0 = oscillation_decomposition(flat, 0.0);
  CHECK(d0.residual_l2 == doctest::Approx(0.0));
  for (double v : d0.sign_field.values()) CHECK(v == doctest::Approx(1.0));

  Field zero(g);
  auto dz = oscillation_decomposition(zero, 1.0);
  CHECK(dz.residual_l2 == doctest::Approx((3.0 - 0.5) * g.volume()));
}

TEST_CASE("volume extraction") {
  std::vector<double> flat(100, 0.005);
  auto v = lemma_volume_extraction(flat, 0.01);
  CHECK(v.kept_sites.size() == 100);
  CHECK(v.coverage == doctest::Approx(1.0));
  CHECK(v.bound_holds);

  // a few spiked sites get dropped; the Chebyshev bound still holds
  std::vector<double> spiked(100, 0.0);
  spiked[3] = spiked[7] = 1.0;
  auto s = lemma_volume_extraction(spiked, 0.02);
  CHECK(s.kept_sites.size() == 98);
  CHECK(s.bound_holds);

  CHECK_THROWS(lemma_volume_extraction(std::vector<double>(10, 1.0), 0.5));  // mean > eps
  CHECK_THROWS(lemma_volume_extraction({-0.1, 0.0}, 0.5));
  CHECK_THROWS(lemma_volume_extraction({}, 0.5));
  CHECK_THROWS(lemma_volume_extraction({0.1}, 0.0));
}

TEST_CASE("gradient probes on free samples") {
  Setup lab(3, 8, 2.0, 2, make_schedule(0.0, 0.0, 0.0));
  FreeSampler sampler(lab.spec, 14);
  std::vector<Field> draws;
  for (int i = 0; i < 200; ++i) draws.push_back(sampler.sample());

  auto probe = gradient_probe_case3(lab.ctx, draws);
  double exact = lab.ctx.wick.d_n * lab.grid.volume() / 4.0;  // n = 2
  CHECK(std::fabs(probe.normalized.mean - exact) <= 4.0 * probe.normalized.std_err);

  CHECK(sup_gradient_fraction(lab.ctx, draws, 1e9) == doctest::Approx(1.0));
  CHECK(sup_gradient_fraction(lab.ctx, draws, 0.0) == doctest::Approx(0.0));
  double eta_mid = 2.0;
  CHECK(sup_gradient_fraction(lab.ctx, draws, eta_mid) <=
        sup_gradient_fraction(lab.ctx, draws, 2.0 * eta_mid));

  auto means = site_gradient_means(lab.ctx, draws);
  CHECK(means.size() == lab.grid.sites());
  for (double v : means) CHECK(v >= 0.0);
}

TEST_CASE("concentration probe under the free measure") {
  Setup lab(2, 8, 1.0, 4, make_schedule(1e-6, 0.0, 0.0));
  auto cls = classify_case(make_schedule(1e-6, 0.0, 0.0), 4, lab.ctx.wick);
  FreeSampler sampler(lab.spec, 15);
  std::vector<Field> draws;
  for (int i = 0; i < 400; ++i) draws.push_back(sampler.sample());
  double min_cl = classical_constant_minimum(cls.lambda_n, cls.alpha_n, cls.beta_n,
                                             lab.grid.volume());
  auto rep = concentration_probe(lab.ctx, cls, 0.5 * std::fabs(min_cl), draws);
  CHECK(rep.fraction_in_sigma > 0.0);
  CHECK(rep.fraction_in_sigma < 1.0);
  CHECK(rep.min_classical == doctest::Approx(min_cl));
  CHECK(rep.epsilon == doctest::Approx(3.0 * lab.grid.volume()));
}
