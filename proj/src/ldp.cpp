#include "phi4/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phi4 {

RateFunctionTable empirical_logmgf(const std::vector<double>& samples,
                                   const std::vector<double>& theta_grid) {
  if (samples.empty()) throw std::invalid_argument("empirical_logmgf: no samples");
  RateFunctionTable t;
  t.theta_grid = theta_grid;
  t.logmgf.resize(theta_grid.size());
  double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    double th = theta_grid[k];
    if (th == 0.0) {
      t.logmgf[k] = 0.0;
      continue;
    }
    double shift = th * samples[0];
    for (double y : samples) shift = std::max(shift, th * y);
    double acc = 0.0;
    for (double y : samples) acc += std::exp(th * y - shift);
    t.logmgf[k] = shift + std::log(acc / n);
  }
  return t;
}

void legendre_fenchel(RateFunctionTable& table, const std::vector<double>& y_grid) {
  table.y_grid = y_grid;
  table.transform.resize(y_grid.size());
  table.argmax_theta.resize(y_grid.size());
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    double best = -1e300, best_theta = 0.0;
    for (std::size_t k = 0; k < table.theta_grid.size(); ++k) {
      double v = table.theta_grid[k] * y_grid[i] - table.logmgf[k];
      if (v > best) {
        best = v;
        best_theta = table.theta_grid[k];
      }
    }
    table.transform[i] = best;
    table.argmax_theta[i] = best_theta;
  }
}

double tilted_mean(const std::vector<double>& samples, double theta) {
  return tilted_functional_mean(samples, [](double y) { return y; }, theta);
}

double tilted_functional_mean(const std::vector<double>& samples,
                              const std::function<double(double)>& G, double theta) {
  if (samples.empty()) throw std::invalid_argument("tilted mean: no samples");
  double shift = theta * samples[0];
  for (double y : samples) shift = std::max(shift, theta * y);
  double num = 0.0, den = 0.0;
  for (double y : samples) {
    double w = std::exp(theta * y - shift);
    num += G(y) * w;
    den += w;
  }
  return num / den;
}

bool is_convex(const std::vector<double>& xs, const std::vector<double>& ys, double tol) {
  if (xs.size() != ys.size() || xs.size() < 3) return true;
  double prev = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  for (std::size_t i = 2; i < xs.size(); ++i) {
    double s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    if (s < prev - tol) return false;
    prev = s;
  }
  return true;
}

std::vector<double> classical_minimizer(double alpha) {
  if (alpha < 6.0) {
    double s = std::sqrt(3.0 - alpha / 2.0);
    return {s, -s};
  }
  return {0.0};
}

double classical_constant_minimum(double lambda, double alpha, double beta, double volume) {
  auto density = [&](double s) {
    double s2 = s * s;
    return lambda * (s2 * s2 - 6.0 * s2 + 3.0) + alpha * (s2 - 1.0) - beta;
  };
  double best = density(0.0);
  if (lambda > 0.0) {
    double s2 = 3.0 - alpha / (2.0 * lambda);
    if (s2 > 0.0) best = std::min(best, density(std::sqrt(s2)));
  }
  return best * volume;
}

ConcentrationReport concentration_probe(const ActionContext& ctx, const CaseClassification& cls,
                                        double epsilon, const std::vector<Field>& samples) {
  ConcentrationReport out;
  out.epsilon = epsilon;
  out.scale = cls.scale;
  out.min_classical = classical_constant_minimum(cls.lambda_n, cls.alpha_n, cls.beta_n,
                                                ctx.grid().volume());
  double inv_sqrt_c = 1.0 / std::sqrt(ctx.wick.c_n);
  std::size_t inside = 0;
  for (const auto& phi : samples) {
    Field psi = ctx.kernel->mollify(phi);
    for (auto& v : psi.values()) v *= inv_sqrt_c;
    double a = classical_action_wick(psi, cls.lambda_n, cls.alpha_n, cls.beta_n, ctx.wick);
    if (a <= out.min_classical + epsilon) ++inside;
  }
  out.fraction_in_sigma = static_cast<double>(inside) / static_cast<double>(samples.size());
  if (out.fraction_in_sigma < 1.0 && out.scale > 0.0)
    out.log_complement_per_scale = std::log(1.0 - out.fraction_in_sigma) / out.scale;
  return out;
}

namespace {
std::vector<double> grad_square_sites(const Field& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.sites(), 0.0);
  double inv_eps = 1.0 / g.spacing();
  for (int dir = 0; dir < g.dim(); ++dir)
    for (std::size_t i = 0; i < g.sites(); ++i) {
      double d = (f[g.neighbor(i, dir, 1)] - f[i]) * inv_eps;
      out[i] += d * d;
    }
  return out;
}
}  // namespace

GradientProbe gradient_probe_case3(const ActionContext& ctx, const std::vector<Field>& samples) {
  double inv_sqrt_c = 1.0 / std::sqrt(ctx.wick.c_n);
  double n2 = static_cast<double>(ctx.n) * ctx.n;
  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const auto& phi : samples) {
    Field psi = ctx.kernel->mollify(phi);
    for (auto& v : psi.values()) v *= inv_sqrt_c;
    auto gs = grad_square_sites(psi);
    double integral = 0.0;
    for (double v : gs) integral += v;
    integral *= psi.grid().cell_volume();
    vals.push_back(integral / n2);
  }
  GradientProbe out;
  out.normalized = batch_mean_estimate(vals);
  out.per_site = out.normalized;
  double vol = ctx.grid().volume();
  out.per_site.mean /= vol;
  out.per_site.std_err /= vol;
  return out;
}

double sup_gradient_fraction(const ActionContext& ctx, const std::vector<Field>& samples,
                             double eta) {
  double inv_sqrt_c = 1.0 / std::sqrt(ctx.wick.c_n);
  std::size_t count = 0;
  for (const auto& phi : samples) {
    Field psi = ctx.kernel->mollify(phi);
    for (auto& v : psi.values()) v *= inv_sqrt_c;
    auto gs = grad_square_sites(psi);
    double m = 0.0;
    for (double v : gs) m = std::max(m, v);
    if (std::sqrt(m) <= eta) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

std::vector<double> site_gradient_means(const ActionContext& ctx,
                                        const std::vector<Field>& samples) {
  double inv_sqrt_c = 1.0 / std::sqrt(ctx.wick.c_n);
  std::vector<double> acc(ctx.grid().sites(), 0.0);
  for (const auto& phi : samples) {
    Field psi = ctx.kernel->mollify(phi);
    for (auto& v : psi.values()) v *= inv_sqrt_c;
    auto gs = grad_square_sites(psi);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += gs[i];
  }
  for (auto& v : acc) v /= static_cast<double>(samples.size());
  return acc;
}

OscillationDecomposition oscillation_decomposition(const Field& psi, double alpha) {
  double amp = alpha < 6.0 ? std::sqrt(3.0 - alpha / 2.0) : 0.0;
  OscillationDecomposition out;
  out.sign_field = Field(psi.grid());
  out.residual_field = Field(psi.grid());
  double l2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double s = psi[i] < 0.0 ? -1.0 : 1.0;
    out.sign_field[i] = s;
    double xi = psi[i] - amp * s;
    out.residual_field[i] = xi;
    l2 += xi * xi;
  }
  out.residual_l2 = l2 * psi.grid().cell_volume();
  return out;
}

VolumeExtraction lemma_volume_extraction(const std::vector<double>& site_means, double eps) {
  if (site_means.empty()) throw std::invalid_argument("volume extraction: empty input");
  if (!(eps > 0.0)) throw std::invalid_argument("volume extraction: eps must be positive");
  double mean = 0.0;
  for (double v : site_means) {
    if (v < 0.0) throw std::invalid_argument("volume extraction: values must be nonnegative");
    mean += v;
  }
  mean /= static_cast<double>(site_means.size());
  if (mean > eps)
    throw std::invalid_argument("volume extraction: spatial mean exceeds eps");
  double thr = std::sqrt(eps);
  VolumeExtraction out;
  for (std::size_t i = 0; i < site_means.size(); ++i)
    if (site_means[i] <= thr) out.kept_sites.push_back(i);
  out.coverage =
      static_cast<double>(out.kept_sites.size()) / static_cast<double>(site_means.size());
  out.bound_holds = out.coverage >= 1.0 - 2.0 * thr;
  return out;
}

}  // namespace phi4
