#pragma once

#include <iosfwd>
#include <vector>

#include "phi4/grid.hpp"

namespace phi4 {

/// One real value per grid site. Houses field samples, mollified fields and
/// deterministic paths alike.
class Field {
public:
  Field() = default;
  Field(const Grid& grid, double fill = 0.0)
      : grid_(&grid), values_(grid.sites(), fill) {}
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  bool has_grid() const { return grid_ != nullptr; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const;
  double max_abs() const;

private:
  const Grid* grid_ = nullptr;
  std::vector<double> values_;
};

/// Test function: a field with cached sign information. The flag is always
/// recomputed from the values. On the torus every function is boundary-flat
/// in the sense used by the integration-by-parts identities.
class TestFunction {
public:
  TestFunction() = default;
  explicit TestFunction(Field f);

  const Field& field() const { return field_; }
  Field& field() { return field_; }
  const Grid& grid() const { return field_.grid(); }
  double operator[](std::size_t i) const { return field_[i]; }
  std::size_t size() const { return field_.size(); }
  bool nonneg() const { return nonneg_; }
  void refresh_flags();

private:
  Field field_;
  bool nonneg_ = false;
};

/// eps^d sum f*g, the discrete volume integral pairing.
double inner_product(const Field& f, const Field& g);
inline double inner_product(const TestFunction& f, const TestFunction& g) {
  return inner_product(f.field(), g.field());
}
/// phi(f) = eps^d sum phi*f (smearing of a field sample by a test function).
inline double smear(const Field& phi, const Field& f) { return inner_product(phi, f); }

/// Forward difference (phi(x+eps e_i) - phi(x))/eps with periodic wrap.
Field forward_diff(const Field& phi, int dir);
/// Backward (adjoint) difference; eps^d sum (d_i f) g == -eps^d sum f (d_i* g).
Field backward_diff(const Field& phi, int dir);
/// Standard 2d+1-point stencil Laplacian, equal to -(adjoint o forward) composition.
Field discrete_laplacian(const Field& f);

/// Named test-function shapes used by the experiment configs.
Field gaussian_bump(const Grid& g, const std::vector<double>& center, double width,
                    double amplitude = 1.0);
Field indicator_box(const Grid& g, const std::vector<double>& lo, const std::vector<double>& hi);
Field constant_field(const Grid& g, double value);

/// Binary serialization: little-endian header (magic, version, d, N, L)
/// followed by the raw 64-bit float values. Round-trip is bit exact.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is, const Grid& expected);
void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path, const Grid& expected);

}  // namespace phi4
