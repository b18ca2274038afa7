#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace phi4 {

/// Monte Carlo scalar estimate with batch-means error bar.
struct MomentEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  double ess = 0.0;
  std::size_t n_samples = 0;
};

/// Batch-means estimate: the series is cut into at least `min_batches`
/// equal batches; the error bar is the standard error of the batch means.
/// ess compares the naive i.i.d. error to the batch-means error.
MomentEstimate batch_mean_estimate(const std::vector<double>& xs, int min_batches = 20);

/// Per-batch means of a multi-component series: row i of the result is the
/// mean of component i over one batch. Shape: n_batches x n_components.
std::vector<std::vector<double>> batch_means_joint(
    const std::vector<std::vector<double>>& series, int min_batches = 20);

/// Jackknife over rows (batches) for a scalar function of the component
/// means. Respects correlations between components estimated on one chain.
struct JackknifeResult {
  double value = 0.0;
  double std_err = 0.0;
};
JackknifeResult jackknife(const std::vector<std::vector<double>>& batch_rows,
                          const std::function<double(const std::vector<double>&)>& func);

/// Least-squares slope of y against x.
double linfit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Pooled estimate from independent chains (weighted by sample counts).
MomentEstimate merge_estimates(const std::vector<MomentEstimate>& parts);

}  // namespace phi4
