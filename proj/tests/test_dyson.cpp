#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "phi4/dyson.hpp"

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

std::vector<Field> free_draws(const Spectrum& spec, int count, std::uint64_t seed) {
  FreeSampler sampler(spec, seed);
  std::vector<Field> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sampler.sample());
  return out;
}

std::vector<Field> chain_draws(const ActionContext& ctx, int keep, std::uint64_t seed) {
  ChainConfig cfg;
  cfg.sweeps = keep + 600;
  cfg.burn_in = 600;
  cfg.seed = seed;
  MetropolisChain chain(ctx, cfg);
  std::vector<Field> out;
  out.reserve(keep);
  chain.run([&](const Field& phi) { out.push_back(phi); });
  return out;
}

}  // namespace

TEST_CASE("gaussian integration by parts") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  Field h = gaussian_bump(lab.grid, {0.3, 0.7}, 0.15, 1.0);
  auto draws = free_draws(lab.spec, 4000, 404);
  auto rep = residual_free_ibp(lab.spec, f, h, draws);
  CHECK(rep.verdict);
  CHECK(rep.lhs.mean == doctest::Approx(inner_product(h, f)));

  auto self = residual_free_ibp(lab.spec, f, f, draws);
  CHECK(self.verdict);
}

TEST_CASE("free-measure dynamic equations collapse to Wick values") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  double sigma = lab.spec.covariance_form(f, f);
  auto draws = free_draws(lab.spec, 4000, 405);

  auto mc8 = residual_mc8(lab.ctx, f, draws);
  CHECK(mc8.verdict);
  CHECK(mc8.rhs.mean == doctest::Approx(sigma));  // zero action derivative

  auto mc10 = residual_mc10(lab.ctx, f, draws);
  CHECK(mc10.rhs.mean == doctest::Approx(sigma));

  auto m4 = residual_moment4(lab.ctx, f, draws);
  CHECK(m4.verdict);
  CHECK(m4.rhs.mean == doctest::Approx(3.0 * sigma * sigma));

  auto m6 = residual_moment6(lab.ctx, f, draws);
  CHECK(m6.verdict);
  CHECK(m6.rhs.mean == doctest::Approx(15.0 * sigma * sigma * sigma));

  auto sd = residual_second_dyson(lab.ctx, f, draws);
  CHECK(sd.lhs.mean == doctest::Approx(0.0));
  CHECK(sd.rhs.mean == doctest::Approx(0.0));
}

TEST_CASE("interacting residual suite on a small grid") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.05, 0.05));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  Field h = gaussian_bump(lab.grid, {0.3, 0.7}, 0.15, 1.0);
  auto draws = chain_draws(lab.ctx, 6000, 406);

  CHECK(residual_mc8(lab.ctx, f, draws).verdict);
  CHECK(residual_mc8b(lab.ctx, f, h, draws).verdict);
  CHECK(residual_mc9(lab.ctx, f, 4, draws).verdict);
  CHECK(residual_mc10(lab.ctx, f, draws).verdict);
  CHECK(residual_moment4(lab.ctx, f, draws).verdict);
  CHECK(residual_if7(lab.ctx, f, h, draws).verdict);
  CHECK(residual_second_dyson(lab.ctx, f, draws).verdict);
  CHECK(residual_moment6(lab.ctx, f, draws).verdict);
}

TEST_CASE("mc9 at p=2 equals mc8") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.0, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  auto draws = chain_draws(lab.ctx, 800, 407);
  auto a = residual_mc8(lab.ctx, f, draws);
  auto b = residual_mc9(lab.ctx, f, 2, draws);
  CHECK(a.lhs.mean == doctest::Approx(b.lhs.mean).epsilon(1e-12));
  CHECK(a.rhs.mean == doctest::Approx(b.rhs.mean).epsilon(1e-12));
  CHECK_THROWS(residual_mc9(lab.ctx, f, 1, draws));
}

TEST_CASE("per-configuration algebraic identities") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.2, 0.1, 0.07));
  Field h = gaussian_bump(lab.grid, {0.3, 0.7}, 0.15, 1.0);
  Field f = gaussian_bump(lab.grid, {0.6, 0.4}, 0.2, 1.0);
  auto draws = free_draws(lab.spec, 5, 408);
  for (const auto& phi : draws) {
    double scale = 1.0 + std::fabs(malliavin_derivative(phi, h, lab.ctx));
    CHECK(mc8b_if7_gap(lab.ctx, h, phi) <= 1e-10 * scale);
    CHECK(moment6_regroup_gap(lab.ctx, f, phi) <= 1e-8);
  }
}

TEST_CASE("generating functional") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.05, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  auto inter = chain_draws(lab.ctx, 4000, 409);
  auto frees = free_draws(lab.spec, 4000, 410);

  // t = 0 is exact on both sides
  auto r0 = generating_functional_check(lab.ctx, f, 0.0, inter, frees);
  CHECK(r0.lhs.mean == doctest::Approx(1.0));
  CHECK(r0.rhs.mean == doctest::Approx(1.0));

  auto r = generating_functional_check(lab.ctx, f, 0.5, inter, frees);
  CHECK(r.verdict);

  // free theory: both routes give the Gaussian MGF
  Setup free_lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  double sigma = free_lab.spec.covariance_form(f, f);
  auto fdraws = free_draws(free_lab.spec, 4000, 411);
  auto fr = generating_functional_check(free_lab.ctx, f, 0.5, fdraws, fdraws);
  CHECK(fr.verdict);
  CHECK(std::fabs(fr.lhs.mean - std::exp(0.125 * sigma)) <= 4.0 * fr.lhs.std_err);
}
