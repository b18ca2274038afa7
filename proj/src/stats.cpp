#include "phi4/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

MomentEstimate batch_mean_estimate(const std::vector<double>& xs, int min_batches) {
  std::size_t n = xs.size();
  if (n < static_cast<std::size_t>(2 * min_batches))
    throw std::invalid_argument("batch_mean_estimate: too few samples");
  std::size_t nb = static_cast<std::size_t>(min_batches);
  std::size_t bs = n / nb;
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);

  double var_bm = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    double bm = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) bm += xs[i];
    bm /= static_cast<double>(bs);
    var_bm += (bm - mean) * (bm - mean);
  }
  var_bm /= static_cast<double>(nb - 1);

  double var_naive = 0.0;
  for (double v : xs) var_naive += (v - mean) * (v - mean);
  var_naive /= static_cast<double>(n - 1);

  MomentEstimate out;
  out.mean = mean;
  out.std_err = std::sqrt(var_bm / static_cast<double>(nb));
  out.n_samples = n;
  if (out.std_err > 0.0 && var_naive > 0.0) {
    double naive_err2 = var_naive / static_cast<double>(n);
    out.ess = std::min(static_cast<double>(n),
                       std::max(1.0, static_cast<double>(n) * naive_err2 /
                                         (out.std_err * out.std_err)));
  } else {
    out.ess = static_cast<double>(n);
  }
  return out;
}

std::vector<std::vector<double>> batch_means_joint(const std::vector<std::vector<double>>& series,
                                                   int min_batches) {
  std::size_t n = series.size();
  if (n < static_cast<std::size_t>(2 * min_batches))
    throw std::invalid_argument("batch_means_joint: too few samples");
  std::size_t p = series.front().size();
  std::size_t nb = static_cast<std::size_t>(min_batches);
  std::size_t bs = n / nb;
  std::vector<std::vector<double>> rows(nb, std::vector<double>(p, 0.0));
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i)
      for (std::size_t j = 0; j < p; ++j) rows[b][j] += series[i][j];
    for (std::size_t j = 0; j < p; ++j) rows[b][j] /= static_cast<double>(bs);
  }
  return rows;
}

JackknifeResult jackknife(const std::vector<std::vector<double>>& batch_rows,
                          const std::function<double(const std::vector<double>&)>& func) {
  std::size_t nb = batch_rows.size();
  if (nb < 2) throw std::invalid_argument("jackknife: need at least 2 batches");
  std::size_t p = batch_rows.front().size();
  std::vector<double> total(p, 0.0);
  for (const auto& r : batch_rows)
    for (std::size_t j = 0; j < p; ++j) total[j] += r[j];

  std::vector<double> full_mean(p);
  for (std::size_t j = 0; j < p; ++j) full_mean[j] = total[j] / static_cast<double>(nb);
  double full_value = func(full_mean);

  std::vector<double> loo(p);
  double jk_mean = 0.0;
  std::vector<double> jk(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t j = 0; j < p; ++j)
      loo[j] = (total[j] - batch_rows[b][j]) / static_cast<double>(nb - 1);
    jk[b] = func(loo);
    jk_mean += jk[b];
  }
  jk_mean /= static_cast<double>(nb);

  double var = 0.0;
  for (double v : jk) var += (v - jk_mean) * (v - jk_mean);
  var *= static_cast<double>(nb - 1) / static_cast<double>(nb);

  JackknifeResult out;
  out.value = full_value;
  out.std_err = std::sqrt(var);
  return out;
}

double linfit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linfit_slope: need matched series of length >= 2");
  double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MomentEstimate merge_estimates(const std::vector<MomentEstimate>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_estimates: empty input");
  double wsum = 0.0, mean = 0.0, var = 0.0, ess = 0.0;
  std::size_t n = 0;
  for (const auto& p : parts) {
    double w = static_cast<double>(p.n_samples);
    wsum += w;
    mean += w * p.mean;
    var += w * w * p.std_err * p.std_err;
    ess += p.ess;
    n += p.n_samples;
  }
  MomentEstimate out;
  out.mean = mean / wsum;
  out.std_err = std::sqrt(var) / wsum;
  out.ess = ess;
  out.n_samples = n;
  return out;
}

}  // namespace phi4
