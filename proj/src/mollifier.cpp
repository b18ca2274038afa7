#include "phi4/mollifier.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

MollifierKernel::MollifierKernel(const Grid& grid, const Spectrum& spec, int n)
    : grid_(&grid), spec_(&spec), n_(n), kernel_(grid) {
  if (n < 1) throw std::invalid_argument("MollifierKernel: n must be positive");
  under_resolved_ = (1.0 / n < 2.0 * grid.spacing());

  double cutoff2 = (6.0 / n) * (6.0 / n);
  double n2 = static_cast<double>(n) * n;
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.sites(); ++i) {
    double r2 = grid.min_image_dist2(i, 0);
    double v = (r2 <= cutoff2) ? std::exp(-0.5 * n2 * r2) : 0.0;
    kernel_[i] = v;
    mass += v;
  }
  mass *= grid.cell_volume();
  if (!(mass > 0.0)) throw std::runtime_error("MollifierKernel: empty kernel support");
  for (auto& v : kernel_.values()) v /= mass;

  auto khat = spec.forward(kernel_);
  hat_.resize(khat.size());
  for (std::size_t i = 0; i < khat.size(); ++i) hat_[i] = khat[i].real();
}

Field MollifierKernel::mollify(const Field& phi) const {
  if (!(phi.grid() == *grid_)) throw std::invalid_argument("mollify: grid mismatch");
  return spec_->apply_multiplier(phi, hat_);
}

Field MollifierKernel::mollify_direct(const Field& phi) const {
  if (!(phi.grid() == *grid_)) throw std::invalid_argument("mollify: grid mismatch");
  const Grid& g = *grid_;
  Field out(g);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    auto cx = g.coords(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < g.sites(); ++y) {
      auto cy = g.coords(y);
      std::array<int, 4> diff{};
      for (int i = 0; i < g.dim(); ++i) diff[i] = cx[i] - cy[i];
      acc += kernel_[g.index(diff)] * phi[y];
    }
    out[x] = acc * g.cell_volume();
  }
  return out;
}

}  // namespace phi4
