#include "phi4/action.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

namespace {

/// eps^d sum over sites of the squared forward gradient, per site.
std::vector<double> grad_square(const Field& f) {
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

ActionBreakdown action_on_mollified(const Field& phi_n, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  double c = ctx.wick.c_n;
  double q = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double x = phi_n[i];
    q += wick_power(x, 4, c);
    mm += wick_power(x, 2, c);
  }
  double gr = 0.0;
  if (ctx.a != 0.0) {
    auto gs = grad_square(phi_n);
    for (std::size_t i = 0; i < g.sites(); ++i)
      gr += wick_gradient_square(gs[i], ctx.wick.grad_var);
  } else {
    gr = -ctx.wick.grad_var * static_cast<double>(g.sites());
  }
  double w = g.cell_volume();
  ActionBreakdown out;
  out.quartic = ctx.g * q * w;
  out.mass = ctx.m * mm * w;
  out.gradient = ctx.a * gr * w;
  out.vacuum = (3.0 * ctx.g * c * c - ctx.m * c - ctx.a * ctx.wick.grad_var) * g.volume();
  out.total = out.quartic + out.mass + out.gradient;
  return out;
}

ActionBreakdown action_A_n(const Field& phi, const ActionContext& ctx) {
  return action_on_mollified(ctx.kernel->mollify(phi), ctx);
}

double reduced_action(const Field& psi, const CaseClassification& cls, const WickConstants& wick) {
  const Grid& g = psi.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double x = psi[i];
    acc += cls.lambda_n * wick_power(x, 4, 1.0) + cls.alpha_n * wick_power(x, 2, 1.0);
  }
  if (cls.beta_n != 0.0) {
    auto gs = grad_square(psi);
    for (std::size_t i = 0; i < g.sites(); ++i)
      acc += cls.beta_n / wick.d_n * (gs[i] - wick.d_n);
  } else {
    // the Wick subtraction of the gradient term survives at beta -> 0 only
    // as -beta L^d, which is zero here
  }
  return acc * g.cell_volume();
}

double classical_action(const Field& chi, double lambda, double alpha, double beta,
                        const WickConstants& wick) {
  const Grid& g = chi.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double x2 = chi[i] * chi[i];
    acc += lambda * x2 * x2 + alpha * x2;
  }
  if (beta != 0.0) {
    auto gs = grad_square(chi);
    for (std::size_t i = 0; i < g.sites(); ++i) acc += beta / wick.d_n * gs[i];
  }
  return acc * g.cell_volume();
}

double classical_action_wick(const Field& chi, double lambda, double alpha, double beta,
                             const WickConstants& wick) {
  const Grid& g = chi.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double x = chi[i];
    acc += lambda * wick_power(x, 4, 1.0) + alpha * wick_power(x, 2, 1.0);
  }
  if (beta != 0.0) {
    auto gs = grad_square(chi);
    for (std::size_t i = 0; i < g.sites(); ++i) acc += beta / wick.d_n * (gs[i] - wick.d_n);
  }
  return acc * g.cell_volume();
}

std::vector<double> block_variables(const Field& psi, int n, const CaseClassification& cls,
                                    const WickConstants& wick) {
  const Grid& g = psi.grid();
  if (n < 1 || g.side() % n != 0)
    throw std::invalid_argument("block_variables: grid side not divisible by n");
  int bs = g.side() / n;  // sites per block side
  std::size_t nblocks = 1;
  for (int i = 0; i < g.dim(); ++i) nblocks *= static_cast<std::size_t>(n);
  std::vector<double> out(nblocks, 0.0);
  auto gs = grad_square(psi);
  for (std::size_t i = 0; i < g.sites(); ++i) {
    auto c = g.coords(i);
    std::size_t b = 0;
    for (int k = 0; k < g.dim(); ++k) b = b * n + static_cast<std::size_t>(c[k] / bs);
    double x = psi[i];
    double dens = cls.lambda_n * wick_power(x, 4, 1.0) + cls.alpha_n * wick_power(x, 2, 1.0) +
                  cls.beta_n / wick.d_n * (gs[i] - wick.d_n);
    out[b] += dens;
  }
  for (auto& v : out) v *= g.cell_volume();
  return out;
}

double malliavin_derivative(const Field& phi, const Field& h, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  Field pn = ctx.kernel->mollify(phi);
  Field hn = ctx.kernel->mollify(h);
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i)
    acc += 4.0 * ctx.g * wick_power(pn[i], 3, c) * hn[i] + 2.0 * ctx.m * pn[i] * hn[i];
  if (ctx.a != 0.0) {
    double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
    for (int dir = 0; dir < g.dim(); ++dir)
      for (std::size_t i = 0; i < g.sites(); ++i)
        acc += 2.0 * ctx.a * (pn[g.neighbor(i, dir, 1)] - pn[i]) *
               (hn[g.neighbor(i, dir, 1)] - hn[i]) * inv_eps2;
  }
  return acc * g.cell_volume();
}

double malliavin_derivative_ibp(const Field& phi, const Field& h, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  Field pn = ctx.kernel->mollify(phi);
  Field hn = ctx.kernel->mollify(h);
  Field lap_hn = discrete_laplacian(hn);
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i)
    acc += 4.0 * ctx.g * wick_power(pn[i], 3, c) * hn[i] + 2.0 * ctx.m * pn[i] * hn[i] -
           2.0 * ctx.a * pn[i] * lap_hn[i];
  return acc * g.cell_volume();
}

double malliavin_second_derivative(const Field& phi, const Field& h, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  Field pn = ctx.kernel->mollify(phi);
  Field hn = ctx.kernel->mollify(h);
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i)
    acc += 12.0 * ctx.g * wick_power(pn[i], 2, c) * hn[i] * hn[i] +
           2.0 * ctx.m * hn[i] * hn[i];
  if (ctx.a != 0.0) {
    auto gs = grad_square(hn);
    for (std::size_t i = 0; i < g.sites(); ++i) acc += 2.0 * ctx.a * gs[i];
  }
  return acc * g.cell_volume();
}

double malliavin_third_derivative(const Field& phi, const Field& h, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  Field pn = ctx.kernel->mollify(phi);
  Field hn = ctx.kernel->mollify(h);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i)
    acc += 24.0 * ctx.g * pn[i] * hn[i] * hn[i] * hn[i];
  return acc * g.cell_volume();
}

double malliavin_fourth_derivative(const Field& h, const ActionContext& ctx) {
  const Grid& g = ctx.grid();
  Field hn = ctx.kernel->mollify(h);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double h2 = hn[i] * hn[i];
    acc += 24.0 * ctx.g * h2 * h2;
  }
  return acc * g.cell_volume();
}

}  // namespace phi4
