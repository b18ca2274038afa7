#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "phi4/inequalities.hpp"
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

std::vector<Field> bumps(const Grid& g) {
  return {gaussian_bump(g, {0.25, 0.25}, 0.18, 1.0), gaussian_bump(g, {0.75, 0.25}, 0.18, 1.0),
          gaussian_bump(g, {0.25, 0.75}, 0.18, 1.0), gaussian_bump(g, {0.75, 0.75}, 0.18, 1.0)};
}

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

TEST_CASE("pairing enumeration") {
  CHECK(enumerate_pairings(2).size() == 1);
  CHECK(enumerate_pairings(4).size() == 3);
  CHECK(enumerate_pairings(6).size() == 15);
  CHECK_THROWS(enumerate_pairings(3));
}

TEST_CASE("nonnegativity precondition") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  auto fs = bumps(lab.grid);
  Field bad = fs[0];
  bad[3] = -1.0;
  auto draws = free_draws(lab.spec, 100, 1);
  CHECK_THROWS(check_griffiths1({fs[0], bad}, draws));
}

TEST_CASE("free measure: saturation and vanishing connected parts") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  auto fs = bumps(lab.grid);
  auto draws = free_draws(lab.spec, 8000, 2);

  // pairing bound saturates for a Gaussian
  auto gauss = check_gaussian_inequality(fs, draws);
  CHECK(std::fabs(gauss.margin) <= 3.0 * gauss.err);

  // no connected 4-point function
  auto u4 = ursell4(fs, draws);
  CHECK(std::fabs(u4.first) <= 3.0 * u4.second);

  // two-point positivity for nonnegative functions
  auto g1 = check_griffiths1({fs[0], fs[1]}, draws);
  CHECK(g1.verdict);
  CHECK(lab.spec.covariance_form(fs[0], fs[1]) > 0.0);

  // Griffiths-2 with A = B: variance nonnegativity
  auto g2 = check_griffiths2({fs[0], fs[0]}, 1, draws);
  CHECK(g2.verdict);
}

TEST_CASE("interacting suite passes on a small grid") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.1, 0.05, 0.05));
  auto fs = bumps(lab.grid);
  auto draws = chain_draws(lab.ctx, 1600, 3);

  CHECK(check_griffiths1({fs[0], fs[1]}, draws).verdict);
  CHECK(check_griffiths1(fs, draws).verdict);
  CHECK(check_griffiths2(fs, 2, draws).verdict);
  CHECK(check_gaussian_inequality(fs, draws).verdict);
  auto skel = skeleton_bound(lab.ctx, fs, draws);
  CHECK(skel.first.verdict);
  CHECK(skel.second.verdict);
}

TEST_CASE("quadratic perturbation keeps the measure Gaussian") {
  // g = 0 with a mass term: still Gaussian, so U4 vanishes
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.3, 0.0));
  auto fs = bumps(lab.grid);
  auto draws = chain_draws(lab.ctx, 1600, 4);
  auto u4 = ursell4(fs, draws);
  CHECK(std::fabs(u4.first) <= 3.0 * u4.second);
}

TEST_CASE("odd products need an even count") {
  Setup lab(2, 8, 1.0, 2, make_schedule(0.0, 0.0, 0.0));
  auto fs = bumps(lab.grid);
  auto draws = free_draws(lab.spec, 100, 5);
  CHECK_THROWS(check_griffiths1({fs[0], fs[1], fs[2]}, draws));
}
