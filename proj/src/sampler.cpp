#include "phi4/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

double free_log_density(const Field& phi) {
  const Grid& g = phi.grid();
  double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double v = phi[i];
    acc += v * v;
    for (int dir = 0; dir < g.dim(); ++dir) {
      double d = phi[g.neighbor(i, dir, 1)] - v;
      acc += d * d * inv_eps2;
    }
  }
  return -0.5 * acc * g.cell_volume();
}

double target_log_density(const Field& phi, const ActionContext& ctx) {
  return free_log_density(phi) - action_A_n(phi, ctx).total;
}

MetropolisChain::MetropolisChain(const ActionContext& ctx, const ChainConfig& cfg)
    : ctx_(&ctx),
      cfg_(cfg),
      rng_(cfg.seed, cfg.stream_id),
      phi_(ctx.grid()),
      phi_n_(ctx.grid()),
      width_(cfg.proposal_width) {
  if (cfg.burn_in >= cfg.sweeps)
    throw std::invalid_argument("MetropolisChain: burn_in must be below sweeps");
  if (!(cfg.proposal_width > 0.0))
    throw std::invalid_argument("MetropolisChain: proposal width must be positive");
  interacting_ = (ctx.g != 0.0 || ctx.m != 0.0 || ctx.a != 0.0);
  refresh_cache();
}

void MetropolisChain::refresh_cache() {
  phi_n_ = ctx_->kernel->mollify(phi_);
  const Grid& g = ctx_->grid();
  double c = ctx_->wick.c_n;
  sum4_ = sum2_ = sumg_ = 0.0;
  double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
  for (std::size_t i = 0; i < g.sites(); ++i) {
    sum4_ += wick_power(phi_n_[i], 4, c);
    sum2_ += wick_power(phi_n_[i], 2, c);
    for (int dir = 0; dir < g.dim(); ++dir) {
      double d = phi_n_[g.neighbor(i, dir, 1)] - phi_n_[i];
      sumg_ += d * d * inv_eps2;
    }
  }
}

double MetropolisChain::mollified_drift() const {
  Field fresh = ctx_->kernel->mollify(phi_);
  double m = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i)
    m = std::max(m, std::abs(fresh[i] - phi_n_[i]));
  return m;
}

double MetropolisChain::acceptance_rate() const {
  return proposed_ ? static_cast<double>(accepted_) / static_cast<double>(proposed_) : 0.0;
}

void MetropolisChain::sweep(bool) {
  const Grid& g = ctx_->grid();
  const Field& kv = ctx_->kernel->kernel();
  double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
  double cv = g.cell_volume();
  double c = ctx_->wick.c_n;
  std::size_t nsites = g.sites();
  if (scratch_.size() != nsites) scratch_.assign(nsites, 0.0);

  for (std::size_t upd = 0; upd < nsites; ++upd) {
    std::size_t x = static_cast<std::size_t>(rng_.uniform() * static_cast<double>(nsites));
    if (x >= nsites) x = nsites - 1;
    double delta = width_ * rng_.normal();
    double v = phi_[x];
    double vp = v + delta;

    // free-measure local change: mass term plus the 2d difference terms
    double dfree = vp * vp - v * v;
    for (int dir = 0; dir < g.dim(); ++dir) {
      double up = phi_[g.neighbor(x, dir, 1)];
      double dn = phi_[g.neighbor(x, dir, -1)];
      dfree += ((up - vp) * (up - vp) - (up - v) * (up - v)) * inv_eps2;
      dfree += ((vp - dn) * (vp - dn) - (v - dn) * (v - dn)) * inv_eps2;
    }
    dfree *= 0.5 * cv;

    double daction = 0.0;
    double s4 = 0.0, s2 = 0.0, sg = 0.0;
    if (interacting_) {
      // shifting one site shifts the mollified field by delta * eps^d * K(.-x);
      // evaluate the proposed action sums in one pass over the kernel column
      auto cx = g.coords(x);
      std::array<int, 4> diff{};
      for (std::size_t y = 0; y < nsites; ++y) {
        auto cy = g.coords(y);
        for (int i = 0; i < g.dim(); ++i) diff[i] = cy[i] - cx[i];
        scratch_[y] = phi_n_[y] + delta * cv * kv[g.index(diff)];
      }
      for (std::size_t y = 0; y < nsites; ++y) {
        s4 += wick_power(scratch_[y], 4, c);
        s2 += wick_power(scratch_[y], 2, c);
        for (int dir = 0; dir < g.dim(); ++dir) {
          double d = scratch_[g.neighbor(y, dir, 1)] - scratch_[y];
          sg += d * d * inv_eps2;
        }
      }
      daction = cv * (ctx_->g * (s4 - sum4_) + ctx_->m * (s2 - sum2_) +
                      ctx_->a * (sg - sumg_));
    }

    ++proposed_;
    double log_u = std::log(rng_.uniform());
    if (log_u < -(dfree + daction)) {
      ++accepted_;
      phi_[x] = vp;
      if (interacting_) {
        std::swap(phi_n_.values(), scratch_);
        sum4_ = s4;
        sum2_ = s2;
        sumg_ = sg;
      }
    }
  }
}

void MetropolisChain::run(const std::function<void(const Field&)>& sink) {
  int tune_window = 20;
  for (int s = 0; s < cfg_.burn_in; ++s) {
    std::uint64_t a0 = accepted_, p0 = proposed_;
    sweep(true);
    tune_acc_ += accepted_ - a0;
    tune_prop_ += proposed_ - p0;
    if ((s + 1) % tune_window == 0 && tune_prop_ > 0) {
      double rate = static_cast<double>(tune_acc_) / static_cast<double>(tune_prop_);
      width_ *= std::exp(1.5 * (rate - 0.4));
      width_ = std::min(1e3, std::max(1e-4, width_));
      tune_acc_ = tune_prop_ = 0;
    }
    if (interacting_ && (s + 1) % cfg_.refresh_every == 0) refresh_cache();
  }
  // width frozen from here on; counters restart so acceptance_rate reports
  // the production phase only
  accepted_ = proposed_ = 0;
  for (int s = cfg_.burn_in; s < cfg_.sweeps; ++s) {
    sweep(false);
    if (interacting_ && (s + 1) % cfg_.refresh_every == 0) refresh_cache();
    int k = s - cfg_.burn_in;
    if (k % cfg_.thinning == 0 && sink) sink(phi_);
  }
  refresh_cache();
}

ReweightedEstimate reweighted_expectation(const std::vector<double>& observable,
                                          const std::vector<double>& action_values) {
  if (observable.size() != action_values.size() || observable.empty())
    throw std::invalid_argument("reweighted_expectation: size mismatch");
  double shift = action_values[0];
  for (double a : action_values) shift = std::min(shift, a);
  std::size_t n = observable.size();
  std::vector<std::vector<double>> joint(n, std::vector<double>(2));
  double wsum = 0.0, w2sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = std::exp(-(action_values[i] - shift));
    joint[i][0] = w * observable[i];
    joint[i][1] = w;
    wsum += w;
    w2sum += w * w;
  }
  auto rows = batch_means_joint(joint);
  auto jk = jackknife(rows, [](const std::vector<double>& r) { return r[0] / r[1]; });
  ReweightedEstimate out;
  out.est.mean = jk.value;
  out.est.std_err = jk.std_err;
  out.est.n_samples = n;
  out.weight_ess = wsum * wsum / w2sum;
  out.est.ess = out.weight_ess;
  out.reliable = out.weight_ess >= 50.0;
  return out;
}

JackknifeResult estimate_log_Z(const std::vector<double>& action_values) {
  if (action_values.empty()) throw std::invalid_argument("estimate_log_Z: empty input");
  double shift = action_values[0];
  for (double a : action_values) shift = std::min(shift, a);
  std::vector<std::vector<double>> joint(action_values.size(), std::vector<double>(1));
  for (std::size_t i = 0; i < action_values.size(); ++i)
    joint[i][0] = std::exp(-(action_values[i] - shift));
  auto rows = batch_means_joint(joint);
  auto jk = jackknife(rows, [shift](const std::vector<double>& r) {
    return std::log(r[0]) - shift;
  });
  return jk;
}

std::vector<double> absorbed_mode_mass(const ActionContext& ctx) {
  const auto& lam = ctx.spec->laplacian_eigenvalues();
  const auto& khat = ctx.kernel->hat();
  double meff = ctx.m - 6.0 * ctx.g * ctx.wick.c_n;
  std::vector<double> mm(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) {
    mm[k] = lam[k] + 1.0 + (2.0 * meff + 2.0 * ctx.a * lam[k]) * khat[k] * khat[k];
    if (!(mm[k] > 0.0))
      throw std::runtime_error("absorbed_mode_mass: non-positive quadratic form");
  }
  return mm;
}

double mode_mass_covariance_form(const Spectrum& spec, const std::vector<double>& mode_mass,
                                 const Field& f, const Field& g) {
  auto fhat = spec.forward(f);
  auto ghat = spec.forward(g);
  double s = 0.0;
  for (std::size_t k = 0; k < fhat.size(); ++k)
    s += (std::conj(fhat[k]) * ghat[k]).real() / mode_mass[k];
  return s / spec.grid().volume();
}

}  // namespace phi4
