#pragma once

#include <complex>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/grid.hpp"

namespace phi4 {

/// Discrete Fourier machinery on the torus. Conventions:
///   forward:  fhat(k) = eps^d sum_x f(x) e^{-2 pi i k.x / N}
///   inverse:  f(x) = (1/L^d) sum_k fhat(k) e^{+2 pi i k.x / N}
/// so that (f,g) = (1/L^d) sum_k conj(fhat) ghat (Parseval) and the
/// eps^d-weighted periodic convolution becomes a plain product of transforms.
class Spectrum {
public:
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const { return *grid_; }

  std::vector<std::complex<double>> forward(const Field& f) const;
  Field inverse(const std::vector<std::complex<double>>& fhat) const;

  /// Eigenvalue of -Laplacian (forward/backward difference composition)
  /// for mode k: sum_i (2 - 2 cos(2 pi k_i / N)) / eps^2.
  const std::vector<double>& laplacian_eigenvalues() const { return lambda_; }

  /// Multiply the spectrum of f by the given per-mode real factors.
  Field apply_multiplier(const Field& f, const std::vector<double>& mult) const;

  /// f -> Cf with C = (-Laplacian + 1)^{-1}: divide each mode by lambda_k + 1.
  Field apply_covariance(const Field& f) const;
  /// f -> C^{-1} f: multiply each mode by lambda_k + 1.
  Field apply_inverse_covariance(const Field& f) const;

  /// (f, Cg), evaluated spectrally.
  double covariance_form(const Field& f, const Field& g) const;

private:
  void fft_axis(std::vector<std::complex<double>>& data, int axis, bool inverse) const;
  void fft1d(std::complex<double>* line, std::size_t stride, bool inverse) const;

  const Grid* grid_;
  std::vector<double> lambda_;
  std::vector<std::complex<double>> twiddle_;  // e^{-2 pi i j / N}, j = 0..N-1
  bool pow2_;
};

}  // namespace phi4
