#include "phi4/grid.hpp"

#include <cmath>

namespace phi4 {

Grid::Grid(int dim, int sites_per_side, double side_length)
    : dim_(dim), side_(sites_per_side), length_(side_length) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("Grid: dim must be 1..4");
  if (sites_per_side < 2) throw std::invalid_argument("Grid: need at least 2 sites per side");
  if (!(side_length > 0.0)) throw std::invalid_argument("Grid: side length must be positive");
  double sites_f = std::pow(static_cast<double>(side_), dim_);
  if (sites_f > static_cast<double>(kMaxSites))
    throw std::invalid_argument("Grid: site count " + std::to_string(sites_f) +
                                " exceeds memory cap " + std::to_string(kMaxSites));
  sites_ = 1;
  for (int i = 0; i < dim_; ++i) sites_ *= static_cast<std::size_t>(side_);
  spacing_ = length_ / side_;
  cell_vol_ = std::pow(spacing_, dim_);
  total_vol_ = std::pow(length_, dim_);
  std::size_t s = 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= side_;
  }
}

std::size_t Grid::neighbor(std::size_t idx, int dir, int steps) const {
  std::size_t s = stride_[dir];
  int c = static_cast<int>((idx / s) % side_);
  int cw = wrap(c + steps);
  return idx + (static_cast<std::size_t>(cw) - static_cast<std::size_t>(c)) * s;
}

double Grid::min_image_dist2(std::size_t a, std::size_t b) const {
  auto ca = coords(a);
  auto cb = coords(b);
  double r2 = 0.0;
  for (int i = 0; i < dim_; ++i) {
    int dk = std::abs(ca[i] - cb[i]);
    dk = std::min(dk, side_ - dk);
    double dx = dk * spacing_;
    r2 += dx * dx;
  }
  return r2;
}

}  // namespace phi4
