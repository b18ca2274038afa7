#pragma once

#include <map>
#include <stdexcept>

#include "phi4/free_field.hpp"

namespace phi4 {

/// One coefficient sequence n -> value, either closed form base * n^exponent
/// or an explicit table.
class CoeffSequence {
public:
  CoeffSequence() = default;
  CoeffSequence(double base, double exponent) : base_(base), exp_(exponent) {}
  static CoeffSequence constant(double v) { return CoeffSequence(v, 0.0); }
  static CoeffSequence table(std::map<int, double> t) {
    CoeffSequence s;
    s.table_ = std::move(t);
    s.tabulated_ = true;
    return s;
  }

  double operator()(int n) const;
  bool tabulated() const { return tabulated_; }
  double base() const { return base_; }
  double exponent() const { return exp_; }

private:
  double base_ = 0.0;
  double exp_ = 0.0;
  bool tabulated_ = false;
  std::map<int, double> table_;
};

/// The three counterterm sequences of the regularized action:
/// coupling g_n (quartic), mass m_n (quadratic), wave a_n (gradient).
struct RenormSchedule {
  CoeffSequence g, m, a;

  double g_at(int n) const { return check_g(g(n)); }
  double m_at(int n) const { return m(n); }
  double a_at(int n) const { return a(n); }

  static double check_g(double v) {
    if (v < 0.0) throw std::invalid_argument("schedule: coupling g_n must be >= 0");
    return v;
  }
};

/// Dominance classification of the action at cutoff n. The scale is the
/// largest of g_n c_n^2 (case 1), m_n c_n (case 2), a_n c_n d_n (case 3);
/// the reduced coefficients are the three products divided by the scale, so
/// exactly one of lambda_n, alpha_n, beta_n equals 1.
struct CaseClassification {
  int case_tag = 0;
  double lambda_n = 0.0;
  double alpha_n = 0.0;
  double beta_n = 0.0;
  double scale = 0.0;
};

/// Ties break in the order 1 > 2 > 3 with tolerance 1e-12 relative.
CaseClassification classify_case(const RenormSchedule& sched, int n, const WickConstants& wick);

}  // namespace phi4
