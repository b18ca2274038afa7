#pragma once

#include <functional>
#include <vector>

#include "phi4/action.hpp"
#include "phi4/stats.hpp"

namespace phi4 {

/// Empirical log moment generating function and its convex conjugate,
/// both on explicit grids.
struct RateFunctionTable {
  std::vector<double> theta_grid;
  std::vector<double> logmgf;
  std::vector<double> y_grid;
  std::vector<double> transform;
  std::vector<double> argmax_theta;  // maximizing theta per y
};

/// Lambda(theta) = log mean e^{theta Y}, max-shifted for stability.
/// Lambda(0) = 0 exactly.
RateFunctionTable empirical_logmgf(const std::vector<double>& samples,
                                   const std::vector<double>& theta_grid);

/// Fills transform with max over the theta grid of theta*y - Lambda(theta).
void legendre_fenchel(RateFunctionTable& table, const std::vector<double>& y_grid);

/// Exponentially tilted mean sum Y e^{theta Y} / sum e^{theta Y}; converges
/// to the sample max as theta grows.
double tilted_mean(const std::vector<double>& samples, double theta);
double tilted_functional_mean(const std::vector<double>& samples,
                              const std::function<double(double)>& G, double theta);

/// Slopes nondecreasing within tol; the discrete convexity check used for
/// both Lambda and its transform.
bool is_convex(const std::vector<double>& xs, const std::vector<double>& ys, double tol = 1e-8);

/// Constant minimizers of s^4 + (alpha - 6) s^2 per unit volume:
/// {+-sqrt(3 - alpha/2)} for alpha < 6, {0} otherwise.
std::vector<double> classical_minimizer(double alpha);

/// Minimum over constant paths of the Wick-ordered classical density
/// lambda :s^4: + alpha :s^2: - beta, times the torus volume.
double classical_constant_minimum(double lambda, double alpha, double beta, double volume);

/// Fraction of sampled configurations whose Wick-ordered classical action of
/// psi_n = phi_n / sqrt(c_n) lies within epsilon of the constant-path
/// minimum, plus the exponential-decay shape of the complement.
struct ConcentrationReport {
  double epsilon = 0.0;
  double fraction_in_sigma = 0.0;
  double scale = 0.0;
  double min_classical = 0.0;
  /// log(1 - fraction) / scale; the measured analogue of the e^{-scale delta}
  /// complement bound. 0 when the complement is empty.
  double log_complement_per_scale = 0.0;
};
ConcentrationReport concentration_probe(const ActionContext& ctx, const CaseClassification& cls,
                                        double epsilon, const std::vector<Field>& samples);

/// E[ int |grad psi_n|^2 ] / n^2 with batch-means errors; the probe of the
/// wave-dominant regime. per_site divides additionally by L^d.
struct GradientProbe {
  MomentEstimate normalized;  // int |grad psi_n|^2 / n^2
  MomentEstimate per_site;    // same divided by L^d
};
GradientProbe gradient_probe_case3(const ActionContext& ctx, const std::vector<Field>& samples);

/// Fraction of samples with sup_x |grad psi_n| <= eta.
double sup_gradient_fraction(const ActionContext& ctx, const std::vector<Field>& samples,
                             double eta);

/// Mean of |grad psi_n|^2 per site over the samples.
std::vector<double> site_gradient_means(const ActionContext& ctx,
                                        const std::vector<Field>& samples);

/// psi = amp * sign(psi) + xi with amp = sqrt(3 - alpha/2) (0 when alpha >= 6).
struct OscillationDecomposition {
  Field sign_field;
  Field residual_field;
  double residual_l2 = 0.0;
};
OscillationDecomposition oscillation_decomposition(const Field& psi, double alpha);

/// Chebyshev volume extraction: given nonnegative per-site means with
/// spatial mean <= eps, keeps the sites with value <= sqrt(eps); their count
/// covers at least (1 - sqrt(eps)) of the volume (reported against the
/// 1 - 2 sqrt(eps) requirement).
struct VolumeExtraction {
  std::vector<std::size_t> kept_sites;
  double coverage = 0.0;
  bool bound_holds = false;
};
VolumeExtraction lemma_volume_extraction(const std::vector<double>& site_means, double eps);

}  // namespace phi4
