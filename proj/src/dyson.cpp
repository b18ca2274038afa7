#include "phi4/dyson.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

namespace {

using Func = std::function<double(const std::vector<double>&)>;

ResidualReport make_report(std::string name, const std::vector<std::vector<double>>& prim,
                           const Func& lhs_fn, const Func& rhs_fn) {
  auto rows = batch_means_joint(prim);
  auto L = jackknife(rows, lhs_fn);
  auto R = jackknife(rows, rhs_fn);
  auto D = jackknife(rows, [&](const std::vector<double>& r) { return lhs_fn(r) - rhs_fn(r); });
  ResidualReport out;
  out.identity_name = std::move(name);
  out.lhs = {L.value, L.std_err, 0.0, prim.size()};
  out.rhs = {R.value, R.std_err, 0.0, prim.size()};
  out.residual = D.value;
  out.combined_err = std::max(D.std_err, 1e-15 * (1.0 + std::abs(L.value) + std::abs(R.value)));
  out.z_score = out.residual / out.combined_err;
  out.verdict = std::abs(out.z_score) <= 3.0;
  return out;
}

/// Everything precomputed about a derivative direction u: its mollification
/// u_n, the linear weight of the quadratic action terms (gradient part
/// integrated by parts), and the phi-independent derivative pieces.
struct Direction {
  Field un;
  Field lap_un;
  Field wlin;          // 2 m u_n - 2 a Laplacian u_n
  double d2_const = 0.0;  // 2 m int u_n^2 + 2 a int |grad u_n|^2
  double d4 = 0.0;        // 24 g int u_n^4
};

Direction make_direction(const ActionContext& ctx, const Field& u) {
  Direction d;
  d.un = ctx.kernel->mollify(u);
  d.lap_un = discrete_laplacian(d.un);
  const Grid& g = ctx.grid();
  d.wlin = Field(g);
  double c2 = 0.0, c4 = 0.0, cgrad = 0.0;
  for (std::size_t i = 0; i < g.sites(); ++i) {
    d.wlin[i] = 2.0 * ctx.m * d.un[i] - 2.0 * ctx.a * d.lap_un[i];
    double u2 = d.un[i] * d.un[i];
    c2 += u2;
    c4 += u2 * u2;
    cgrad += -d.un[i] * d.lap_un[i];  // int |grad u|^2 = -int u lap u, exact
  }
  double cv = g.cell_volume();
  d.d2_const = 2.0 * ctx.m * c2 * cv + 2.0 * ctx.a * cgrad * cv;
  d.d4 = 24.0 * ctx.g * c4 * cv;
  return d;
}

double d1_ibp(const ActionContext& ctx, const Field& pn, const Direction& d) {
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < pn.size(); ++i)
    acc += 4.0 * ctx.g * wick_power(pn[i], 3, c) * d.un[i] + pn[i] * d.wlin[i];
  return acc * pn.grid().cell_volume();
}

double d1_direct(const ActionContext& ctx, const Field& pn, const Direction& d) {
  const Grid& g = pn.grid();
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < pn.size(); ++i)
    acc += 4.0 * ctx.g * wick_power(pn[i], 3, c) * d.un[i] + 2.0 * ctx.m * pn[i] * d.un[i];
  double gacc = 0.0;
  double inv_eps2 = 1.0 / (g.spacing() * g.spacing());
  for (int dir = 0; dir < g.dim(); ++dir)
    for (std::size_t i = 0; i < pn.size(); ++i)
      gacc += (pn[g.neighbor(i, dir, 1)] - pn[i]) * (d.un[g.neighbor(i, dir, 1)] - d.un[i]) *
              inv_eps2;
  return (acc + 2.0 * ctx.a * gacc) * g.cell_volume();
}

double d2_of(const ActionContext& ctx, const Field& pn, const Direction& d) {
  double c = ctx.wick.c_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < pn.size(); ++i)
    acc += 12.0 * ctx.g * wick_power(pn[i], 2, c) * d.un[i] * d.un[i];
  return acc * pn.grid().cell_volume() + d.d2_const;
}

double d3_of(const ActionContext& ctx, const Field& pn, const Direction& d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pn.size(); ++i)
    acc += 24.0 * ctx.g * pn[i] * d.un[i] * d.un[i] * d.un[i];
  return acc * pn.grid().cell_volume();
}

double bell2(double w1, double w2) { return w2 + w1 * w1; }

double bell4(double w1, double w2, double w3, double w4) {
  return w4 + 4.0 * w3 * w1 + 3.0 * w2 * w2 + 6.0 * w2 * w1 * w1 + w1 * w1 * w1 * w1;
}

double bell6(double w1, double w2, double w3, double w4) {
  double w1_2 = w1 * w1;
  return w1_2 * w1_2 * w1_2 + 15.0 * w1_2 * w1_2 * w2 + 45.0 * w1_2 * w2 * w2 +
         15.0 * w2 * w2 * w2 + 20.0 * w1_2 * w1 * w3 + 60.0 * w1 * w2 * w3 + 10.0 * w3 * w3 +
         15.0 * w1_2 * w4 + 15.0 * w2 * w4;
}

}  // namespace

ResidualReport residual_free_ibp(const Spectrum& spec, const Field& f, const Field& h,
                                 const std::vector<Field>& free_samples) {
  Field u = spec.apply_inverse_covariance(h);
  double hf = inner_product(h, f);
  std::vector<std::vector<double>> prim;
  prim.reserve(free_samples.size());
  for (const auto& phi : free_samples) prim.push_back({smear(phi, u) * smear(phi, f)});
  return make_report(
      "free_ibp", prim, [hf](const std::vector<double>&) { return hf; },
      [](const std::vector<double>& r) { return r[0]; });
}

ResidualReport residual_mc8b(const ActionContext& ctx, const Field& f, const Field& h,
                             const std::vector<Field>& samples) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(h));
  double K = ctx.spec->covariance_form(f, h);
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    prim.push_back({pf * smear(phi, h), pf * d1_direct(ctx, pn, dir)});
  }
  return make_report(
      "mc8b", prim, [](const std::vector<double>& r) { return r[0]; },
      [K](const std::vector<double>& r) { return K - r[1]; });
}

ResidualReport residual_mc8(const ActionContext& ctx, const Field& f,
                            const std::vector<Field>& samples) {
  ResidualReport r = residual_mc8b(ctx, f, f, samples);
  r.identity_name = "mc8";
  return r;
}

ResidualReport residual_mc9(const ActionContext& ctx, const Field& f, int p,
                            const std::vector<Field>& samples) {
  if (p < 2) throw std::invalid_argument("residual_mc9: p must be >= 2");
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(f));
  double sigma = ctx.spec->covariance_form(f, f);
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    double d1 = d1_ibp(ctx, pn, dir);
    prim.push_back({std::pow(pf, p), std::pow(pf, p - 2), std::pow(pf, p - 1) * d1});
  }
  return make_report(
      "mc9_p" + std::to_string(p), prim, [](const std::vector<double>& r) { return r[0]; },
      [sigma, p](const std::vector<double>& r) { return (p - 1) * sigma * r[1] - r[2]; });
}

ResidualReport residual_mc10(const ActionContext& ctx, const Field& f,
                             const std::vector<Field>& samples) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(f));
  double sigma = ctx.spec->covariance_form(f, f);
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    double d1 = d1_ibp(ctx, pn, dir);
    double d2 = d2_of(ctx, pn, dir);
    prim.push_back({pf * pf, d1 * d1 - d2});
  }
  return make_report(
      "mc10", prim, [](const std::vector<double>& r) { return r[0]; },
      [sigma](const std::vector<double>& r) { return sigma + r[1]; });
}

ResidualReport residual_moment4(const ActionContext& ctx, const Field& f,
                                const std::vector<Field>& samples) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(f));
  double sigma = ctx.spec->covariance_form(f, f);
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    double w1 = -d1_ibp(ctx, pn, dir);
    double w2 = -d2_of(ctx, pn, dir);
    double w3 = -d3_of(ctx, pn, dir);
    double w4 = -dir.d4;
    prim.push_back({pf * pf * pf * pf, bell2(w1, w2), bell4(w1, w2, w3, w4)});
  }
  return make_report(
      "moment4", prim, [](const std::vector<double>& r) { return r[0]; },
      [sigma](const std::vector<double>& r) {
        return 3.0 * sigma * sigma + 6.0 * sigma * r[1] + r[2];
      });
}

ResidualReport residual_moment6(const ActionContext& ctx, const Field& f,
                                const std::vector<Field>& samples) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(f));
  double sigma = ctx.spec->covariance_form(f, f);
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    double w1 = -d1_ibp(ctx, pn, dir);
    double w2 = -d2_of(ctx, pn, dir);
    double w3 = -d3_of(ctx, pn, dir);
    double w4 = -dir.d4;
    double pf2 = pf * pf;
    prim.push_back({pf2 * pf2 * pf2, bell2(w1, w2), bell4(w1, w2, w3, w4),
                    bell6(w1, w2, w3, w4)});
  }
  return make_report(
      "moment6", prim, [](const std::vector<double>& r) { return r[0]; },
      [sigma](const std::vector<double>& r) {
        return 15.0 * sigma * sigma * sigma + 45.0 * sigma * sigma * r[1] +
               15.0 * sigma * r[2] + r[3];
      });
}

ResidualReport residual_if7(const ActionContext& ctx, const Field& f, const Field& h,
                            const std::vector<Field>& samples) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(h));
  double K = ctx.spec->covariance_form(f, h);
  double c = ctx.wick.c_n;
  double cv = ctx.grid().cell_volume();
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double pf = smear(phi, f);
    // the three explicit terms of the expanded derivative, gradient term
    // integrated by parts: 4g int :pn^3: u_n + 2m int pn u_n - 2a int pn lap u_n
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    for (std::size_t i = 0; i < pn.size(); ++i) {
      t1 += wick_power(pn[i], 3, c) * dir.un[i];
      t2 += pn[i] * dir.un[i];
      t3 += pn[i] * dir.lap_un[i];
    }
    double dA = (4.0 * ctx.g * t1 + 2.0 * ctx.m * t2 - 2.0 * ctx.a * t3) * cv;
    prim.push_back({pf * smear(phi, h), pf * dA});
  }
  return make_report(
      "if7", prim, [](const std::vector<double>& r) { return r[0]; },
      [K](const std::vector<double>& r) { return K - r[1]; });
}

ResidualReport residual_second_dyson(const ActionContext& ctx, const Field& f,
                                     const std::vector<Field>& samples) {
  Field u = ctx.spec->apply_covariance(f);
  Direction dir = make_direction(ctx, u);
  Field u_nn = ctx.kernel->mollify(dir.un);
  Field lap_u_nn = discrete_laplacian(u_nn);
  double K1 = inner_product(u_nn, u);
  double K2 = inner_product(lap_u_nn, u);
  double c = ctx.wick.c_n;
  double g = ctx.g, m = ctx.m, a = ctx.a;
  double cv = ctx.grid().cell_volume();
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double P = 0.0, b = 0.0, q = 0.0;
    for (std::size_t i = 0; i < pn.size(); ++i) {
      P += pn[i] * pn[i] * pn[i] * dir.un[i];
      b += pn[i] * dir.un[i];
      q += pn[i] * dir.lap_un[i];
    }
    P *= cv;
    b *= cv;
    q *= cv;
    double Q = 2.0 * m * b - 2.0 * a * q;
    double S = 4.0 * g * P - 12.0 * g * c * b + Q;
    double pf = smear(phi, f);
    prim.push_back({S * S, P * P - 9.0 * c * c * b * b, pf * b, b * Q, pf * q, Q * Q});
  }
  return make_report(
      "second_dyson", prim, [](const std::vector<double>& r) { return r[0]; },
      [=](const std::vector<double>& r) {
        return 16.0 * g * g * r[1] - 24.0 * g * c * (K1 - r[2] - r[3]) +
               4.0 * m * (K1 - r[2]) - 4.0 * a * (K2 - r[4]) - r[5];
      });
}

double mc8b_if7_gap(const ActionContext& ctx, const Field& h, const Field& phi) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(h));
  Field pn = ctx.kernel->mollify(phi);
  double direct = d1_direct(ctx, pn, dir);
  double c = ctx.wick.c_n;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  for (std::size_t i = 0; i < pn.size(); ++i) {
    t1 += wick_power(pn[i], 3, c) * dir.un[i];
    t2 += pn[i] * dir.un[i];
    t3 += pn[i] * dir.lap_un[i];
  }
  double ibp = (4.0 * ctx.g * t1 + 2.0 * ctx.m * t2 - 2.0 * ctx.a * t3) *
               ctx.grid().cell_volume();
  return std::abs(direct - ibp);
}

double moment6_regroup_gap(const ActionContext& ctx, const Field& f, const Field& phi) {
  Direction dir = make_direction(ctx, ctx.spec->apply_covariance(f));
  double sigma = ctx.spec->covariance_form(f, f);
  Field pn = ctx.kernel->mollify(phi);
  double w1 = -d1_ibp(ctx, pn, dir);
  double w2 = -d2_of(ctx, pn, dir);
  double w3 = -d3_of(ctx, pn, dir);
  double w4 = -dir.d4;
  double flat = 15.0 * sigma * sigma * sigma + 45.0 * sigma * sigma * bell2(w1, w2) +
                15.0 * sigma * bell4(w1, w2, w3, w4) + bell6(w1, w2, w3, w4);
  // same expansion regrouped: Gaussian ladder factored, Bell terms nested
  double w1_2 = w1 * w1;
  double b6_main = w1_2 * (w1_2 * (w1_2 + 15.0 * w2) + 45.0 * w2 * w2 + 20.0 * w1 * w3 +
                           15.0 * w4);
  double b6_comp = 15.0 * w2 * w2 * w2 + 60.0 * w1 * w2 * w3 + 10.0 * w3 * w3 +
                   15.0 * w2 * w4;
  double grouped = b6_main + b6_comp +
                   15.0 * sigma * (bell4(w1, w2, w3, w4) + 3.0 * sigma * bell2(w1, w2) +
                                   sigma * sigma);
  double scale = std::max({1.0, std::abs(flat), std::abs(grouped)});
  return std::abs(flat - grouped) / scale;
}

ResidualReport generating_functional_check(const ActionContext& ctx, const Field& f, double t,
                                           const std::vector<Field>& interacting_samples,
                                           const std::vector<Field>& free_samples) {
  double sigma = ctx.spec->covariance_form(f, f);
  Field u = ctx.spec->apply_covariance(f);
  Field un = ctx.kernel->mollify(u);

  std::vector<std::vector<double>> lhs_prim;
  lhs_prim.reserve(interacting_samples.size());
  for (const auto& phi : interacting_samples) lhs_prim.push_back({std::exp(t * smear(phi, f))});
  auto lhs_rows = batch_means_joint(lhs_prim);
  auto L = jackknife(lhs_rows, [](const std::vector<double>& r) { return r[0]; });

  // shifted action on free samples, both at phi and at phi + t Cf
  std::vector<double> a0(free_samples.size()), at(free_samples.size());
  for (std::size_t i = 0; i < free_samples.size(); ++i) {
    Field pn = ctx.kernel->mollify(free_samples[i]);
    a0[i] = action_on_mollified(pn, ctx).total;
    Field shifted = pn;
    for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += t * un[k];
    at[i] = action_on_mollified(shifted, ctx).total;
  }
  double shift = a0[0];
  for (double v : a0) shift = std::min(shift, v);
  for (double v : at) shift = std::min(shift, v);
  std::vector<std::vector<double>> rhs_prim(free_samples.size(), std::vector<double>(2));
  for (std::size_t i = 0; i < free_samples.size(); ++i) {
    rhs_prim[i][0] = std::exp(-(at[i] - shift));
    rhs_prim[i][1] = std::exp(-(a0[i] - shift));
  }
  double gauss = std::exp(0.5 * t * t * sigma);
  auto rhs_rows = batch_means_joint(rhs_prim);
  auto R = jackknife(rhs_rows,
                     [gauss](const std::vector<double>& r) { return gauss * r[0] / r[1]; });

  ResidualReport out;
  out.identity_name = "generating_functional_t" + std::to_string(t);
  out.lhs = {L.value, L.std_err, 0.0, interacting_samples.size()};
  out.rhs = {R.value, R.std_err, 0.0, free_samples.size()};
  out.residual = L.value - R.value;
  out.combined_err = std::max(std::hypot(L.std_err, R.std_err),
                              1e-15 * (1.0 + std::abs(L.value) + std::abs(R.value)));
  out.z_score = out.residual / out.combined_err;
  out.verdict = std::abs(out.z_score) <= 3.0;
  return out;
}

}  // namespace phi4
