#pragma once

#include <cstdint>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/mollifier.hpp"
#include "phi4/rng.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

/// Exact spectral constants of the mollified free field at cutoff n.
/// c_n = E phi_n(x)^2, grad_var = E |grad phi_n|^2(x) (summed over
/// directions), d_n = grad_var / c_n = E |grad psi_n|^2 for the normalized
/// field psi_n = phi_n / sqrt(c_n).
struct WickConstants {
  int n = 0;
  double c_n = 0.0;
  double grad_var = 0.0;
  double d_n = 0.0;
};

WickConstants compute_wick_constants(const Spectrum& spec, const MollifierKernel& kernel);

/// E phi_n(0) phi_n(lag), exact spectral value. lag in lattice units.
double cov_mollified(const Spectrum& spec, const MollifierKernel& kernel,
                     const std::array<int, 4>& lag);

/// Site variance of the unmollified field, E phi(x)^2.
double site_variance(const Spectrum& spec);

/// Wick (Hermite) ordering with variance c, orders 1..4:
/// :x: = x, :x^2: = x^2 - c, :x^3: = x^3 - 3cx, :x^4: = x^4 - 6cx^2 + 3c^2.
double wick_power(double x, int p, double c);

/// :(grad phi_n)^2: at a site given the already-summed squared gradient.
inline double wick_gradient_square(double grad_sq, double grad_var) {
  return grad_sq - grad_var;
}

/// Draws from the Gaussian measure with covariance (-Laplacian + 1)^{-1}
/// under the eps^d-weighted smearing convention: E phi(f) phi(g) = (f, Cg).
/// Site variance therefore scales with the mode sum, not with eps^d; the
/// per-mode factor is 1/sqrt(eps^d (lambda_k + 1)) applied to white noise.
class FreeSampler {
public:
  FreeSampler(const Spectrum& spec, std::uint64_t seed, std::uint64_t stream = 0);
  /// Same construction but for the Gaussian measure with spectral density
  /// 1/(lambda_k + 1 + extra_k): used when part of a quadratic action is
  /// absorbed into the reference measure.
  FreeSampler(const Spectrum& spec, std::vector<double> mode_mass, std::uint64_t seed,
              std::uint64_t stream = 0);

  Field sample();

private:
  const Spectrum* spec_;
  std::vector<double> scale_;  // per-mode 1/sqrt(eps^d M_k)
  GaussianRng rng_;
};

}  // namespace phi4
