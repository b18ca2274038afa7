#pragma once

#include <string>
#include <vector>

#include "phi4/sampler.hpp"

namespace phi4 {

/// Two-sided Monte Carlo check of one identity. The residual and its error
/// come from a jackknife over batch means of the joint primitive vector, so
/// correlations between both sides (estimated on one chain) are respected.
struct ResidualReport {
  std::string identity_name;
  MomentEstimate lhs;
  MomentEstimate rhs;
  double residual = 0.0;
  double combined_err = 0.0;
  double z_score = 0.0;
  bool verdict = false;
};

/// Gaussian integration by parts under the free measure:
/// E_0[d_h phi(f)] = E_0[phi(C^{-1}h) phi(f)], lhs = (h,f) exactly.
ResidualReport residual_free_ibp(const Spectrum& spec, const Field& f, const Field& h,
                                 const std::vector<Field>& free_samples);

/// E phi(f) phi(h) = (Cf, h) - E phi(f) d_{C h} A. The derivative direction
/// is C applied to the second smearing function; only this convention
/// reduces to the Gaussian identity at A = 0.
ResidualReport residual_mc8b(const ActionContext& ctx, const Field& f, const Field& h,
                             const std::vector<Field>& samples);
/// h = f specialization: E phi(f)^2 = sigma_f - E phi(f) d_{Cf} A.
ResidualReport residual_mc8(const ActionContext& ctx, const Field& f,
                            const std::vector<Field>& samples);
/// E phi(f)^p = (p-1) sigma_f E phi(f)^{p-2} - E phi(f)^{p-1} d_{Cf} A.
ResidualReport residual_mc9(const ActionContext& ctx, const Field& f, int p,
                            const std::vector<Field>& samples);
/// E phi(f)^2 = sigma_f + E[(d_{Cf} A)^2 - d^2_{Cf} A].
ResidualReport residual_mc10(const ActionContext& ctx, const Field& f,
                             const std::vector<Field>& samples);
/// 4th moment via the full derivative expansion (complete Bell polynomial of
/// the first four directional derivatives).
ResidualReport residual_moment4(const ActionContext& ctx, const Field& f,
                                const std::vector<Field>& samples);
/// 6th moment, same machinery one order up. Costly; keep to small grids.
ResidualReport residual_moment6(const ActionContext& ctx, const Field& f,
                                const std::vector<Field>& samples);
/// Same identity as mc8b with d_h A expanded into its three explicit terms
/// and the gradient term integrated by parts.
ResidualReport residual_if7(const ActionContext& ctx, const Field& f, const Field& h,
                            const std::vector<Field>& samples);
/// Expanded second dynamic equation: E (d_u A)^2 with u = Cf against the
/// block expansion where the linear-in-phi cross terms are reduced through
/// the first dynamic equation.
ResidualReport residual_second_dyson(const ActionContext& ctx, const Field& f,
                                     const std::vector<Field>& samples);

/// Per-configuration gap between the mc8b derivative d_h A and the if7
/// three-term expansion; exactly zero up to rounding on the torus.
double mc8b_if7_gap(const ActionContext& ctx, const Field& h, const Field& phi);

/// Per-configuration gap between the two algebraic groupings of the 6th
/// moment expansion (full Bell polynomial vs main + complementary terms).
double moment6_regroup_gap(const ActionContext& ctx, const Field& f, const Field& phi);

/// Cameron-Martin route: E_n e^{t phi(f)} vs
/// E_0[e^{-A(phi + t Cf)}] e^{t^2 sigma_f / 2} / Z_n, the two sides estimated
/// on independent streams (interacting chain, free samples).
ResidualReport generating_functional_check(const ActionContext& ctx, const Field& f, double t,
                                           const std::vector<Field>& interacting_samples,
                                           const std::vector<Field>& free_samples);

}  // namespace phi4
