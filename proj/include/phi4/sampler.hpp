#pragma once

#include <cstdint>
#include <functional>

#include "phi4/action.hpp"
#include "phi4/stats.hpp"

namespace phi4 {

/// Log-density of the interacting measure w.r.t. flat measure on site values,
/// up to an additive constant:
///   -1/2 eps^d sum_x (|grad phi|^2 + phi^2)  -  A_n(phi).
double target_log_density(const Field& phi, const ActionContext& ctx);
/// The quadratic (free-measure) part alone.
double free_log_density(const Field& phi);

struct ChainConfig {
  int sweeps = 1000;
  int burn_in = 200;
  double proposal_width = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;
  int thinning = 1;
  /// Full spectral recomputation of the cached mollified field every this
  /// many sweeps, to stop incremental rounding drift.
  int refresh_every = 64;
};

/// Single-site random-scan Metropolis for e^{-A_n} dmu_0. The mollified
/// field and the three action sums are maintained incrementally through the
/// kernel column of the updated site; a spectral recomputation is the
/// correctness fallback (see refresh_every and tests).
class MetropolisChain {
public:
  MetropolisChain(const ActionContext& ctx, const ChainConfig& cfg);

  /// Runs burn-in (with proposal-width tuning), then the measurement sweeps,
  /// invoking sink on every thinned post-burn-in configuration.
  void run(const std::function<void(const Field&)>& sink);

  double acceptance_rate() const;
  double tuned_width() const { return width_; }
  const Field& current() const { return phi_; }
  const Field& current_mollified() const { return phi_n_; }

  /// Difference between the incrementally maintained mollified field and a
  /// fresh spectral recomputation; exposed for the consistency test.
  double mollified_drift() const;

private:
  void sweep(bool tuning);
  void refresh_cache();

  const ActionContext* ctx_;
  ChainConfig cfg_;
  GaussianRng rng_;
  Field phi_;
  Field phi_n_;
  double sum4_ = 0.0, sum2_ = 0.0, sumg_ = 0.0;  // Sum :pn^4:, :pn^2:, (grad pn)^2
  bool interacting_ = false;
  double width_;
  std::uint64_t accepted_ = 0, proposed_ = 0;
  std::uint64_t tune_acc_ = 0, tune_prop_ = 0;
  std::vector<double> scratch_;
};

/// Ratio estimator E_0[Y e^{-A}] / E_0[e^{-A}] from free-field samples,
/// with max-shifted weights and jackknife error over batch means.
struct ReweightedEstimate {
  MomentEstimate est;
  double weight_ess = 0.0;
  bool reliable = true;  // false when weight_ess < 50
};
ReweightedEstimate reweighted_expectation(const std::vector<double>& observable,
                                          const std::vector<double>& action_values);

/// log Z_n = log E_0 e^{-A_n}, max-shifted, with jackknife error.
JackknifeResult estimate_log_Z(const std::vector<double>& action_values);

/// Mode masses M_k = lambda_k + 1 + 2(m_n - 6 g_n c_n) khat^2 + 2 a_n lambda_k khat^2
/// for the Gaussian measure that absorbs every quadratic part of the action
/// (including the quadratic piece of the Wick-ordered quartic). Sampling from
/// it and reweighting by e^{-g_n int phi_n^4} reproduces mu_n exactly.
std::vector<double> absorbed_mode_mass(const ActionContext& ctx);

/// (f, M^{-1} g) for a general mode-mass table: the smeared covariance of
/// the absorbed Gaussian measure.
double mode_mass_covariance_form(const Spectrum& spec, const std::vector<double>& mode_mass,
                                 const Field& f, const Field& g);

}  // namespace phi4
