#include "phi4/spectral.hpp"

#include <cmath>

namespace phi4 {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Spectrum::Spectrum(const Grid& grid) : grid_(&grid) {
  int n = grid.side();
  pow2_ = (n & (n - 1)) == 0;
  twiddle_.resize(n);
  for (int j = 0; j < n; ++j) {
    double a = -kTwoPi * j / n;
    twiddle_[j] = {std::cos(a), std::sin(a)};
  }
  double inv_eps2 = 1.0 / (grid.spacing() * grid.spacing());
  lambda_.resize(grid.sites());
  for (std::size_t idx = 0; idx < grid.sites(); ++idx) {
    auto k = grid.coords(idx);
    double lam = 0.0;
    for (int i = 0; i < grid.dim(); ++i)
      lam += (2.0 - 2.0 * std::cos(kTwoPi * k[i] / n)) * inv_eps2;
    lambda_[idx] = lam;
  }
}

void Spectrum::fft1d(std::complex<double>* line, std::size_t stride, bool inverse) const {
  int n = grid_->side();
  if (pow2_) {
    // iterative radix-2 with bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
      int bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(line[i * stride], line[j * stride]);
    }
    for (int len = 2; len <= n; len <<= 1) {
      int step = n / len;
      for (int i = 0; i < n; i += len) {
        for (int j = 0; j < len / 2; ++j) {
          std::complex<double> w = twiddle_[j * step];
          if (inverse) w = std::conj(w);
          std::complex<double>& u = line[(i + j) * stride];
          std::complex<double>& v = line[(i + j + len / 2) * stride];
          std::complex<double> t = v * w;
          v = u - t;
          u = u + t;
        }
      }
    }
  } else {
    // direct O(n^2) transform; only reached on small non-power-of-2 grids
    std::vector<std::complex<double>> out(n);
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (int x = 0; x < n; ++x) {
        std::complex<double> w = twiddle_[(static_cast<long long>(k) * x) % n];
        if (inverse) w = std::conj(w);
        acc += line[x * stride] * w;
      }
      out[k] = acc;
    }
    for (int k = 0; k < n; ++k) line[k * stride] = out[k];
  }
}

void Spectrum::fft_axis(std::vector<std::complex<double>>& data, int axis, bool inverse) const {
  int d = grid_->dim();
  int n = grid_->side();
  std::size_t stride = 1;
  for (int i = d - 1; i > axis; --i) stride *= n;
  std::size_t line_span = stride * n;
  std::size_t total = data.size();
  for (std::size_t base = 0; base < total; base += line_span)
    for (std::size_t off = 0; off < stride; ++off) fft1d(data.data() + base + off, stride, inverse);
}

std::vector<std::complex<double>> Spectrum::forward(const Field& f) const {
  std::vector<std::complex<double>> data(f.values().begin(), f.values().end());
  for (int axis = 0; axis < grid_->dim(); ++axis) fft_axis(data, axis, false);
  double w = grid_->cell_volume();
  for (auto& z : data) z *= w;
  return data;
}

Field Spectrum::inverse(const std::vector<std::complex<double>>& fhat) const {
  std::vector<std::complex<double>> data = fhat;
  for (int axis = 0; axis < grid_->dim(); ++axis) fft_axis(data, axis, true);
  double w = 1.0 / grid_->volume();
  Field out(*grid_);
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real() * w;
  return out;
}

Field Spectrum::apply_multiplier(const Field& f, const std::vector<double>& mult) const {
  auto fhat = forward(f);
  for (std::size_t i = 0; i < fhat.size(); ++i) fhat[i] *= mult[i];
  return inverse(fhat);
}

Field Spectrum::apply_covariance(const Field& f) const {
  auto fhat = forward(f);
  for (std::size_t i = 0; i < fhat.size(); ++i) fhat[i] /= lambda_[i] + 1.0;
  return inverse(fhat);
}

Field Spectrum::apply_inverse_covariance(const Field& f) const {
  auto fhat = forward(f);
  for (std::size_t i = 0; i < fhat.size(); ++i) fhat[i] *= lambda_[i] + 1.0;
  return inverse(fhat);
}

double Spectrum::covariance_form(const Field& f, const Field& g) const {
  auto fhat = forward(f);
  auto ghat = forward(g);
  double s = 0.0;
  for (std::size_t i = 0; i < fhat.size(); ++i)
    s += (std::conj(fhat[i]) * ghat[i]).real() / (lambda_[i] + 1.0);
  return s / grid_->volume();
}

}  // namespace phi4
