#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "phi4/free_field.hpp"
#include "phi4/sampler.hpp"
#include "phi4/stats.hpp"

using namespace phi4;

namespace {
struct Online {
  double s = 0.0, s2 = 0.0;
  long n = 0;
  void add(double x) {
    s += x;
    s2 += x * x;
    ++n;
  }
  double mean() const { return s / n; }
  double std_err() const {
    double m = mean();
    return std::sqrt(std::max(0.0, s2 / n - m * m) / n);
  }
};
}  // namespace

TEST_CASE("sampler determinism") {
  Grid g(2, 8, 1.0);
  Spectrum spec(g);
  FreeSampler a(spec, 99), b(spec, 99);
  CHECK(a.sample().values() == b.sample().values());
  FreeSampler c(spec, 99, 1);
  CHECK(a.sample().values() != c.sample().values());
}

TEST_CASE("smeared moments match the spectral covariance") {
  Grid g(2, 16, 1.0);
  Spectrum spec(g);
  Field f = gaussian_bump(g, {0.5, 0.5}, 0.15, 1.0);
  double sigma = spec.covariance_form(f, f);
  FreeSampler sampler(spec, 123);
  Online m1, m2;
  for (int i = 0; i < 20000; ++i) {
    double v = smear(sampler.sample(), f);
    m1.add(v);
    m2.add(v * v);
  }
  CHECK(std::fabs(m1.mean()) <= 3.0 * m1.std_err());
  CHECK(std::fabs(m2.mean() - sigma) <= 3.0 * m2.std_err());
}

TEST_CASE("wick power algebra") {
  CHECK(wick_power(0.0, 2, 1.0) == doctest::Approx(-1.0));
  CHECK(wick_power(2.0, 3, 0.5) == doctest::Approx(8.0 - 3.0 * 0.5 * 2.0));
  CHECK(wick_power(1.5, 4, 2.0) ==
        doctest::Approx(std::pow(1.5, 4) - 6.0 * 2.0 * 1.5 * 1.5 + 3.0 * 4.0));
  CHECK(wick_power(0.7, 1, 3.0) == doctest::Approx(0.7));
  CHECK_THROWS(wick_power(1.0, 5, 1.0));
  CHECK_THROWS(wick_power(1.0, 2, 0.0));
  CHECK(wick_gradient_square(2.0, 0.5) == doctest::Approx(1.5));
}

TEST_CASE("wick powers of the mollified field are centered") {
  Grid g(2, 16, 1.0);
  Spectrum spec(g);
  MollifierKernel kern(g, spec, 2);
  auto wc = compute_wick_constants(spec, kern);
  FreeSampler sampler(spec, 321);
  Online p2, p3, p4;
  for (int i = 0; i < 20000; ++i) {
    double x = kern.mollify(sampler.sample())[0];
    p2.add(wick_power(x, 2, wc.c_n));
    p3.add(wick_power(x, 3, wc.c_n));
    p4.add(wick_power(x, 4, wc.c_n));
  }
  CHECK(std::fabs(p2.mean()) <= 3.0 * p2.std_err());
  CHECK(std::fabs(p3.mean()) <= 3.0 * p3.std_err());
  CHECK(std::fabs(p4.mean()) <= 3.0 * p4.std_err());
}

TEST_CASE("wick constants") {
  Grid g(3, 16, 2.5);
  Spectrum spec(g);
  std::vector<double> dn_over_n2;
  for (int n : {2, 4, 8}) {
    MollifierKernel kern(g, spec, n);
    auto wc = compute_wick_constants(spec, kern);
    CHECK(wc.c_n > 0.0);
    CHECK(wc.grad_var > 0.0);
    CHECK(wc.d_n * wc.c_n == doctest::Approx(wc.grad_var).epsilon(1e-12));
    dn_over_n2.push_back(wc.d_n / (n * n));
  }
  // the normalized gradient constant is stable within a factor two
  double lo = *std::min_element(dn_over_n2.begin(), dn_over_n2.end());
  double hi = *std::max_element(dn_over_n2.begin(), dn_over_n2.end());
  CHECK(hi <= 2.0 * lo);

  // a kernel much finer than the grid acts as the identity
  Grid g2(2, 16, 1.0);
  Spectrum spec2(g2);
  MollifierKernel fine(g2, spec2, 256);
  auto wc = compute_wick_constants(spec2, fine);
  CHECK(wc.c_n == doctest::Approx(site_variance(spec2)).epsilon(1e-10));
}

TEST_CASE("mollified covariance function") {
  Grid g(2, 12, 1.0);
  Spectrum spec(g);
  MollifierKernel kern(g, spec, 2);
  auto wc = compute_wick_constants(spec, kern);
  CHECK(cov_mollified(spec, kern, {0, 0, 0, 0}) == doctest::Approx(wc.c_n).epsilon(1e-12));
  CHECK(cov_mollified(spec, kern, {3, 2, 0, 0}) ==
        doctest::Approx(cov_mollified(spec, kern, {-3, -2, 0, 0})).epsilon(1e-12));
  // stationarity: no lag beats zero lag
  for (int lag = 1; lag < 6; ++lag)
    CHECK(cov_mollified(spec, kern, {lag, 0, 0, 0}) <= wc.c_n + 1e-12);

  // Monte Carlo agreement at one lag
  FreeSampler sampler(spec, 777);
  Online cov;
  std::size_t other = g.index({2, 1, 0, 0});
  for (int i = 0; i < 20000; ++i) {
    Field pn = kern.mollify(sampler.sample());
    cov.add(pn[0] * pn[other]);
  }
  double exact = cov_mollified(spec, kern, {2, 1, 0, 0});
  CHECK(std::fabs(cov.mean() - exact) <= 3.0 * cov.std_err());
}

TEST_CASE("absorbed-mass sampler matches its covariance form") {
  Grid g(2, 8, 1.0);
  Spectrum spec(g);
  const auto& lam = spec.laplacian_eigenvalues();
  std::vector<double> mass(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) mass[k] = lam[k] + 1.0 + 0.5 * (k % 3);
  Field f = gaussian_bump(g, {0.3, 0.6}, 0.2, 1.0);
  double sigma = mode_mass_covariance_form(spec, mass, f, f);
  FreeSampler sampler(spec, mass, 888);
  Online m2;
  for (int i = 0; i < 20000; ++i) {
    double v = smear(sampler.sample(), f);
    m2.add(v * v);
  }
  CHECK(std::fabs(m2.mean() - sigma) <= 3.0 * m2.std_err());
}
