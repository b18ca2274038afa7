#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "phi4/sampler.hpp"
#include "phi4/stats.hpp"

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

Field random_field(const Grid& g, std::uint64_t seed) {
  GaussianRng rng(seed);
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
  return f;
}

}  // namespace

TEST_CASE("log densities") {
  Setup free_lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  Field phi = random_field(free_lab.grid, 3);
  CHECK(target_log_density(phi, free_lab.ctx) ==
        doctest::Approx(free_log_density(phi)).epsilon(1e-12));

  // log-density differences match the quadratic + action difference
  Setup lab(2, 8, 1.0, 2, make_schedule(0.2, 0.1, 0.05));
  Field psi = random_field(lab.grid, 4);
  double lhs = target_log_density(phi, lab.ctx) - target_log_density(psi, lab.ctx);
  double rhs = free_log_density(phi) - free_log_density(psi) -
               action_A_n(phi, lab.ctx).total + action_A_n(psi, lab.ctx).total;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("free-schedule chain reproduces the Gaussian covariance") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);
  double sigma = lab.spec.covariance_form(f, f);

  ChainConfig cfg;
  cfg.sweeps = 6000;
  cfg.burn_in = 1000;
  cfg.seed = 2024;
  MetropolisChain chain(lab.ctx, cfg);
  std::vector<double> second;
  chain.run([&](const Field& phi) {
    double v = smear(phi, f);
    second.push_back(v * v);
  });
  auto est = batch_mean_estimate(second);
  CHECK(std::fabs(est.mean - sigma) <= 3.0 * est.std_err);
  CHECK(chain.acceptance_rate() > 0.2);
  CHECK(chain.acceptance_rate() < 0.6);
}

TEST_CASE("same seed, same stream") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.05, 0.0));
  ChainConfig cfg;
  cfg.sweeps = 300;
  cfg.burn_in = 100;
  cfg.seed = 55;
  std::vector<double> t1, t2;
  MetropolisChain c1(lab.ctx, cfg), c2(lab.ctx, cfg);
  c1.run([&](const Field& phi) { t1.push_back(phi[7]); });
  c2.run([&](const Field& phi) { t2.push_back(phi[7]); });
  CHECK(t1 == t2);
}

TEST_CASE("incremental cache stays on the spectral recomputation") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.15, 0.1, 0.05));
  ChainConfig cfg;
  cfg.sweeps = 500;
  cfg.burn_in = 100;
  cfg.seed = 77;
  cfg.refresh_every = 1000000;  // disable periodic refresh to expose drift
  MetropolisChain chain(lab.ctx, cfg);
  chain.run([](const Field&) {});
  CHECK(chain.mollified_drift() <= 1e-8);
}

TEST_CASE("reweighted expectation") {
  std::vector<double> obs(400), act_zero(400, 0.0), act_const(400, 2.5);
  double plain = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    obs[i] = std::sin(0.1 * static_cast<double>(i));
    plain += obs[i];
  }
  plain /= static_cast<double>(obs.size());
  auto r0 = reweighted_expectation(obs, act_zero);
  CHECK(r0.est.mean == doctest::Approx(plain).epsilon(1e-12));
  auto rc = reweighted_expectation(obs, act_const);
  CHECK(rc.est.mean == doctest::Approx(plain).epsilon(1e-12));
  CHECK(rc.weight_ess == doctest::Approx(static_cast<double>(obs.size())));
}

TEST_CASE("chain vs reweighting at small coupling") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.05, 0.0, 0.0));
  Field f = gaussian_bump(lab.grid, {0.5, 0.5}, 0.2, 1.0);

  ChainConfig cfg;
  cfg.sweeps = 6000;
  cfg.burn_in = 1000;
  cfg.seed = 31;
  MetropolisChain chain(lab.ctx, cfg);
  std::vector<double> second;
  chain.run([&](const Field& phi) {
    double v = smear(phi, f);
    second.push_back(v * v);
  });
  auto mc = batch_mean_estimate(second);

  FreeSampler sampler(lab.spec, 32);
  std::vector<double> obs, act;
  for (int i = 0; i < 6000; ++i) {
    Field phi = sampler.sample();
    double v = smear(phi, f);
    obs.push_back(v * v);
    act.push_back(action_A_n(phi, lab.ctx).total);
  }
  auto rw = reweighted_expectation(obs, act);
  CHECK(rw.reliable);
  double err = std::hypot(mc.std_err, rw.est.std_err);
  CHECK(std::fabs(mc.mean - rw.est.mean) <= 3.0 * err);
}

TEST_CASE("partition-function estimator") {
  std::vector<double> zero(200, 0.0);
  auto z = estimate_log_Z(zero);
  CHECK(z.value == doctest::Approx(0.0));

  // shifting the action by a constant shifts log Z by minus that constant
  GaussianRng rng(5);
  std::vector<double> act(200), shifted(200);
  for (std::size_t i = 0; i < act.size(); ++i) {
    act[i] = rng.normal();
    shifted[i] = act[i] + 1.7;
  }
  CHECK(estimate_log_Z(shifted).value ==
        doctest::Approx(estimate_log_Z(act).value - 1.7).epsilon(1e-12));
}

TEST_CASE("absorbed mode masses") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.3, 0.2));
  auto mm = absorbed_mode_mass(lab.ctx);
  for (double v : mm) CHECK(v > 0.0);

  // strongly negative absorbed mass term must be rejected
  Setup bad(2, 8, 1.0, 2, make_schedule(0.0, -0.8, 0.0));
  CHECK_THROWS(absorbed_mode_mass(bad.ctx));
}
