#pragma once

#include <vector>

#include "phi4/free_field.hpp"
#include "phi4/mollifier.hpp"
#include "phi4/schedule.hpp"

namespace phi4 {

/// Term-by-term value of the regularized action
///   A_n(phi) = eps^d sum_x [ g_n :phi_n^4: + m_n :phi_n^2: + a_n :(grad phi_n)^2: ].
/// vacuum is the value at phi = 0 (the constant part hidden inside the Wick
/// subtractions), reported for inspection; total = quartic + mass + gradient.
struct ActionBreakdown {
  double quartic = 0.0;
  double mass = 0.0;
  double gradient = 0.0;
  double vacuum = 0.0;
  double total = 0.0;
};

/// Bundles everything the action needs at a fixed cutoff: the spectral
/// machinery, the kernel, the schedule evaluated at n, and the exact Wick
/// constants.
struct ActionContext {
  const Spectrum* spec = nullptr;
  const MollifierKernel* kernel = nullptr;
  int n = 0;
  double g = 0.0, m = 0.0, a = 0.0;
  WickConstants wick;

  ActionContext() = default;
  ActionContext(const Spectrum& s, const MollifierKernel& k, const RenormSchedule& sched)
      : spec(&s), kernel(&k), n(k.n()) {
    g = sched.g_at(n);
    m = sched.m_at(n);
    a = sched.a_at(n);
    wick = compute_wick_constants(s, k);
  }
  const Grid& grid() const { return spec->grid(); }
};

/// Action evaluated on the already-mollified field.
ActionBreakdown action_on_mollified(const Field& phi_n, const ActionContext& ctx);
/// Action of a raw configuration; mollifies first.
ActionBreakdown action_A_n(const Field& phi, const ActionContext& ctx);

/// Reduced action of the normalized field psi = phi_n / sqrt(c_n):
///   lambda int :psi^4: + alpha int :psi^2: + (beta/d_n) int :(grad psi)^2:
/// with unit Wick variance and gradient constant d_n. Satisfies
/// scale * reduced_action(psi) = A_n(phi) exactly.
double reduced_action(const Field& psi, const CaseClassification& cls, const WickConstants& wick);

/// Deterministic classical functional with raw (non-Wick) powers:
///   int [ lambda chi^4 + alpha chi^2 + (beta/d_n) (grad chi)^2 ].
double classical_action(const Field& chi, double lambda, double alpha, double beta,
                        const WickConstants& wick);
/// Wick-ordered variant (unit variance), the large-scale limit shape whose
/// constant minimum is -6 L^d at lambda = 1, alpha = beta = 0.
double classical_action_wick(const Field& chi, double lambda, double alpha, double beta,
                             const WickConstants& wick);

/// Per-block integrals of the reduced Lagrangian density over the n^d
/// congruent sub-blocks of the torus; their sum is reduced_action(psi).
/// Requires the grid side divisible by n.
std::vector<double> block_variables(const Field& psi, int n, const CaseClassification& cls,
                                    const WickConstants& wick);

/// Directional (Malliavin) derivatives of A_n along h. The direction enters
/// only through its mollification h_n.
double malliavin_derivative(const Field& phi, const Field& h, const ActionContext& ctx);
/// Same value with the gradient term integrated by parts:
/// -2 a_n eps^d sum phi_n (Laplacian h_n); exact on the torus.
double malliavin_derivative_ibp(const Field& phi, const Field& h, const ActionContext& ctx);
double malliavin_second_derivative(const Field& phi, const Field& h, const ActionContext& ctx);
double malliavin_third_derivative(const Field& phi, const Field& h, const ActionContext& ctx);
double malliavin_fourth_derivative(const Field& h, const ActionContext& ctx);

}  // namespace phi4
