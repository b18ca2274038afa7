#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace phi4 {

/// Periodic torus geometry: N sites per side in each of d directions,
/// physical side length L, spacing eps = L/N. All indexing wraps.
class Grid {
public:
  Grid(int dim, int sites_per_side, double side_length);

  int dim() const { return dim_; }
  int side() const { return side_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  std::size_t sites() const { return sites_; }
  /// eps^d, the volume element of one site.
  double cell_volume() const { return cell_vol_; }
  /// L^d, the total volume of the torus.
  double volume() const { return total_vol_; }

  /// Flattened row-major index of integer coordinates (wrapped).
  std::size_t index(const std::array<int, 4>& coord) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx = idx * side_ + wrap(coord[i]);
    return idx;
  }
  std::array<int, 4> coords(std::size_t idx) const {
    std::array<int, 4> c{};
    for (int i = dim_ - 1; i >= 0; --i) {
      c[i] = static_cast<int>(idx % side_);
      idx /= side_;
    }
    return c;
  }
  /// Index of the site shifted by `steps` lattice units in direction `dir`.
  std::size_t neighbor(std::size_t idx, int dir, int steps) const;

  int wrap(int k) const {
    int r = k % side_;
    return r < 0 ? r + side_ : r;
  }
  /// Minimum-image physical distance squared between two sites.
  double min_image_dist2(std::size_t a, std::size_t b) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && side_ == o.side_ && length_ == o.length_;
  }

  /// Largest site count accepted by the constructor.
  static constexpr std::size_t kMaxSites = 1u << 27;

private:
  int dim_;
  int side_;
  double length_;
  double spacing_;
  std::size_t sites_;
  double cell_vol_;
  double total_vol_;
  std::array<std::size_t, 4> stride_{};
};

}  // namespace phi4
