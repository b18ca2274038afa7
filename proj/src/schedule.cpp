#include "phi4/schedule.hpp"

#include <cmath>

namespace phi4 {

double CoeffSequence::operator()(int n) const {
  if (n < 1) throw std::invalid_argument("CoeffSequence: n must be positive");
  if (tabulated_) {
    auto it = table_.find(n);
    if (it == table_.end())
      throw std::invalid_argument("CoeffSequence: no table entry for n=" + std::to_string(n));
    return it->second;
  }
  return base_ * std::pow(static_cast<double>(n), exp_);
}

CaseClassification classify_case(const RenormSchedule& sched, int n, const WickConstants& wick) {
  double s1 = sched.g_at(n) * wick.c_n * wick.c_n;
  double s2 = sched.m_at(n) * wick.c_n;
  double s3 = sched.a_at(n) * wick.c_n * wick.d_n;
  double top = std::max({s1, s2, s3});
  if (!(top > 0.0))
    throw std::invalid_argument("classify_case: all scales vanish (free theory)");
  double tol = 1e-12 * top;
  CaseClassification out;
  if (s1 >= top - tol)
    out.case_tag = 1;
  else if (s2 >= top - tol)
    out.case_tag = 2;
  else
    out.case_tag = 3;
  out.scale = (out.case_tag == 1) ? s1 : (out.case_tag == 2) ? s2 : s3;
  out.lambda_n = s1 / out.scale;
  out.alpha_n = s2 / out.scale;
  out.beta_n = s3 / out.scale;
  return out;
}

}  // namespace phi4
