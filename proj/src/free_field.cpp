#include "phi4/free_field.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

WickConstants compute_wick_constants(const Spectrum& spec, const MollifierKernel& kernel) {
  const auto& lam = spec.laplacian_eigenvalues();
  const auto& khat = kernel.hat();
  double c = 0.0, gv = 0.0;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    double w = khat[k] * khat[k] / (lam[k] + 1.0);
    c += w;
    gv += lam[k] * w;
  }
  double vol = spec.grid().volume();
  WickConstants out;
  out.n = kernel.n();
  out.c_n = c / vol;
  out.grad_var = gv / vol;
  out.d_n = out.grad_var / out.c_n;
  return out;
}

double cov_mollified(const Spectrum& spec, const MollifierKernel& kernel,
                     const std::array<int, 4>& lag) {
  const Grid& g = spec.grid();
  const auto& lam = spec.laplacian_eigenvalues();
  const auto& khat = kernel.hat();
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double s = 0.0;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    auto kc = g.coords(k);
    double phase = 0.0;
    for (int i = 0; i < g.dim(); ++i) phase += kTwoPi * kc[i] * lag[i] / g.side();
    s += khat[k] * khat[k] / (lam[k] + 1.0) * std::cos(phase);
  }
  return s / g.volume();
}

double site_variance(const Spectrum& spec) {
  const auto& lam = spec.laplacian_eigenvalues();
  double s = 0.0;
  for (double l : lam) s += 1.0 / (l + 1.0);
  return s / spec.grid().volume();
}

double wick_power(double x, int p, double c) {
  if (c <= 0.0) throw std::invalid_argument("wick_power: variance must be positive");
  switch (p) {
    case 1: return x;
    case 2: return x * x - c;
    case 3: return x * x * x - 3.0 * c * x;
    case 4: {
      double x2 = x * x;
      return x2 * x2 - 6.0 * c * x2 + 3.0 * c * c;
    }
    default: throw std::invalid_argument("wick_power: order must be 1..4");
  }
}

FreeSampler::FreeSampler(const Spectrum& spec, std::uint64_t seed, std::uint64_t stream)
    : spec_(&spec), rng_(seed, stream) {
  const auto& lam = spec.laplacian_eigenvalues();
  double cv = spec.grid().cell_volume();
  scale_.resize(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) scale_[k] = 1.0 / std::sqrt(cv * (lam[k] + 1.0));
}

FreeSampler::FreeSampler(const Spectrum& spec, std::vector<double> mode_mass, std::uint64_t seed,
                         std::uint64_t stream)
    : spec_(&spec), rng_(seed, stream) {
  if (mode_mass.size() != spec.grid().sites())
    throw std::invalid_argument("FreeSampler: mode mass table size mismatch");
  double cv = spec.grid().cell_volume();
  scale_.resize(mode_mass.size());
  for (std::size_t k = 0; k < mode_mass.size(); ++k) {
    if (!(mode_mass[k] > 0.0)) throw std::invalid_argument("FreeSampler: mode mass must be > 0");
    scale_[k] = 1.0 / std::sqrt(cv * mode_mass[k]);
  }
}

Field FreeSampler::sample() {
  const Grid& g = spec_->grid();
  Field noise(g);
  for (std::size_t i = 0; i < g.sites(); ++i) noise[i] = rng_.normal();
  // Real white noise has E |what(k)|^2 = eps^d L^d, so scaling each mode by
  // 1/sqrt(eps^d M_k) gives mode variance L^d / M_k, i.e. smeared covariance
  // (f, M^{-1} g).
  return spec_->apply_multiplier(noise, scale_);
}

}  // namespace phi4
