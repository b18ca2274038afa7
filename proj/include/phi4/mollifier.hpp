#pragma once

#include <memory>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

/// Unit-mass Gaussian smoothing kernel of width 1/n on the torus.
/// kernel(x) = (n^2 / 2 pi)^{d/2} e^{-n^2 |x|^2 / 2}, truncated at radius 6/n
/// (minimum image) and renormalized so eps^d sum kernel == 1 exactly.
class MollifierKernel {
public:
  MollifierKernel(const Grid& grid, const Spectrum& spec, int n);

  int n() const { return n_; }
  double width() const { return 1.0 / n_; }
  const Field& kernel() const { return kernel_; }
  /// Fourier multiplier of the kernel; real by symmetry, equals 1 at k = 0.
  const std::vector<double>& hat() const { return hat_; }
  /// True when the kernel width 1/n drops below the grid spacing; the
  /// smoothing then approaches the identity.
  bool under_resolved() const { return under_resolved_; }

  /// Periodic convolution, spectral route: transform, multiply by hat, invert.
  Field mollify(const Field& phi) const;
  /// Direct position-space convolution; O(sites^2) oracle for small grids.
  Field mollify_direct(const Field& phi) const;

private:
  const Grid* grid_;
  const Spectrum* spec_;
  int n_;
  bool under_resolved_;
  Field kernel_;
  std::vector<double> hat_;
};

}  // namespace phi4
