#pragma once

#include <string>
#include <utility>
#include <vector>

#include "phi4/action.hpp"
#include "phi4/stats.hpp"

namespace phi4 {

/// Signed slack of one correlation inequality. Passes when the estimated
/// margin is above -3 standard errors.
struct InequalityVerdict {
  std::string name;
  double margin = 0.0;
  double err = 0.0;
  double z_score = 0.0;
  bool verdict = false;
};

/// E [ phi(f_1) ... phi(f_p) ] >= 0 for nonnegative test functions, p even.
InequalityVerdict check_griffiths1(const std::vector<Field>& fs,
                                   const std::vector<Field>& samples);

/// E[AB] - E[A] E[B] >= 0 where A is the product of the first split_index
/// smeared fields and B the rest.
InequalityVerdict check_griffiths2(const std::vector<Field>& fs, std::size_t split_index,
                                   const std::vector<Field>& samples);

/// sum over pairings of products of two-point functions minus the full
/// 2p-point function; >= 0 for the quartic interaction, = 0 at g = 0.
InequalityVerdict check_gaussian_inequality(const std::vector<Field>& fs,
                                            const std::vector<Field>& samples);

/// Connected 4-point function: E prod - three pairing products.
std::pair<double, double> ursell4(const std::vector<Field>& fs,
                                  const std::vector<Field>& samples);

/// Two margins: -U4 >= 0 and
/// 4! g_n eps^d sum_x prod_i E[phi(f_i) phi_n(x)] - (-U4) >= 0.
std::pair<InequalityVerdict, InequalityVerdict> skeleton_bound(
    const ActionContext& ctx, const std::vector<Field>& fs, const std::vector<Field>& samples);

/// Number of perfect pairings of 2p elements: (2p-1)!!.
std::vector<std::vector<std::pair<int, int>>> enumerate_pairings(int count);

}  // namespace phi4
