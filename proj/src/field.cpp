#include "phi4/field.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <istream>

namespace phi4 {

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(&grid), values_(std::move(values)) {
  if (values_.size() != grid.sites())
    throw std::invalid_argument("Field: value count does not match grid");
}

bool Field::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

TestFunction::TestFunction(Field f) : field_(std::move(f)) { refresh_flags(); }

void TestFunction::refresh_flags() {
  nonneg_ = true;
  for (double v : field_.values())
    if (v < 0.0) {
      nonneg_ = false;
      break;
    }
}

double inner_product(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner_product: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_volume();
}

Field forward_diff(const Field& phi, int dir) {
  const Grid& g = phi.grid();
  Field out(g);
  double inv_eps = 1.0 / g.spacing();
  for (std::size_t i = 0; i < g.sites(); ++i)
    out[i] = (phi[g.neighbor(i, dir, 1)] - phi[i]) * inv_eps;
  return out;
}

Field backward_diff(const Field& phi, int dir) {
  const Grid& g = phi.grid();
  Field out(g);
  double inv_eps = 1.0 / g.spacing();
  for (std::size_t i = 0; i < g.sites(); ++i)
    out[i] = (phi[i] - phi[g.neighbor(i, dir, -1)]) * inv_eps;
  return out;
}

Field discrete_laplacian(const Field& f) {
  const Grid& g = f.grid();
  Field out(g);
  double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double acc = -2.0 * g.dim() * f[i];
    for (int dir = 0; dir < g.dim(); ++dir)
      acc += f[g.neighbor(i, dir, 1)] + f[g.neighbor(i, dir, -1)];
    out[i] = acc * inv_eps2;
  }
  return out;
}

Field gaussian_bump(const Grid& g, const std::vector<double>& center, double width,
                    double amplitude) {
  if (static_cast<int>(center.size()) != g.dim())
    throw std::invalid_argument("gaussian_bump: center dimension mismatch");
  Field out(g);
  for (std::size_t i = 0; i < g.sites(); ++i) {
    auto c = g.coords(i);
    double r2 = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
      double dx = std::abs(c[k] * g.spacing() - center[k]);
      dx = std::min(dx, g.length() - dx);
      r2 += dx * dx;
    }
    out[i] = amplitude * std::exp(-r2 / (2.0 * width * width));
  }
  return out;
}

Field indicator_box(const Grid& g, const std::vector<double>& lo, const std::vector<double>& hi) {
  if (static_cast<int>(lo.size()) != g.dim() || static_cast<int>(hi.size()) != g.dim())
    throw std::invalid_argument("indicator_box: bounds dimension mismatch");
  Field out(g);
  for (std::size_t i = 0; i < g.sites(); ++i) {
    auto c = g.coords(i);
    bool in = true;
    for (int k = 0; k < g.dim(); ++k) {
      double x = c[k] * g.spacing();
      if (x < lo[k] || x >= hi[k]) in = false;
    }
    out[i] = in ? 1.0 : 0.0;
  }
  return out;
}

Field constant_field(const Grid& g, double value) { return Field(g, value); }

namespace {
constexpr std::uint32_t kMagic = 0x34494850;  // "PHI4"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("field read: truncated stream");
  return v;
}
}  // namespace

void write_field(std::ostream& os, const Field& f) {
  put(os, kMagic);
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(f.grid().dim()));
  put(os, static_cast<std::uint32_t>(f.grid().side()));
  put(os, f.grid().length());
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
}

Field read_field(std::istream& is, const Grid& expected) {
  if (get<std::uint32_t>(is) != kMagic) throw std::runtime_error("field read: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("field read: bad version");
  auto d = get<std::uint32_t>(is);
  auto n = get<std::uint32_t>(is);
  auto len = get<double>(is);
  if (static_cast<int>(d) != expected.dim() || static_cast<int>(n) != expected.side() ||
      len != expected.length())
    throw std::runtime_error("field read: header does not match grid");
  std::vector<double> vals(expected.sites());
  is.read(reinterpret_cast<char*>(vals.data()),
          static_cast<std::streamsize>(vals.size() * sizeof(double)));
  if (!is) throw std::runtime_error("field read: truncated values");
  return Field(expected, std::move(vals));
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_field: cannot open " + path);
  write_field(os, f);
}

Field load_field(const std::string& path, const Grid& expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path);
  return read_field(is, expected);
}

}  // namespace phi4
