#pragma once

// Exact minimization of T(n+xi, n+xi) over the causal ball/sphere via the
// eigendecomposition + secular-equation route, the four energy-condition
// verdicts, and the closed-form completions used as cross-checks.

#include <string>

#include "emtlab/emt.hpp"

namespace emtlab::energycond {

// q(xi) = c + 2 b.xi + xi^T A xi = T(n + xi, n + xi)
struct QuadraticForm {
  double c = 0;
  RVec b;
  RMat A;

  int dim() const { return static_cast<int>(b.size()); }
  double eval(const RVec& xi) const;
  static QuadraticForm from_tensor(const emt::EnergyMomentumTensor& t);
  static QuadraticForm from_matrix(const RMat& full, int m);  // frame components
};

struct BallMinResult {
  double value = 0;
  RVec argmin;
  bool boundary = false;
  double multiplier = 0;     // nu in (A + nu I) xi = -b on boundary solves
  double kkt_residual = 0;   // ||(A + nu I) xi + b||
};

// Global minimum over {|xi| <= 1}, or over {|xi| = 1} when boundary_only.
// Interior candidates solve A xi = -b with A positive semidefinite; boundary
// solutions come from the secular equation |(A + nu I)^{-1} b| = 1 over
// nu >= max(0-or-none, -lambda_min), with the hard case completed along the
// bottom eigenspace.
BallMinResult minimize_quadratic_over_ball(const QuadraticForm& q, bool boundary_only);

enum class Condition { NEC, WEC, SEC, DEC };
enum class Status { holds, violated, inconclusive };

const char* condition_name(Condition c);
const char* status_name(Status s);

struct ConditionVerdict {
  Condition condition = Condition::NEC;
  Status status = Status::holds;
  double margin = 0;  // minimized value; negative margins witness violations
  RVec witness;       // extremal xi
};

ConditionVerdict check_condition(const emt::EnergyMomentumTensor& t, Condition cond,
                                 double tol = 1e-10);

std::vector<ConditionVerdict> check_all_conditions(const emt::EnergyMomentumTensor& t,
                                                   double tol = 1e-10);

// Closed-form completions from the normal/spatial splits; each must equal
// the generic contraction of the raw components.
double higgs_txx_completion(const CVec& dphi_n, const std::vector<CVec>& dphi_spatial, double u,
                            const RVec& xi);
double ym_txx_completion(const gauge::EBSplit& eb, const RVec& xi);
double ym_sec_completion(const gauge::EBSplit& eb, const RVec& xi, int m);

// Sampling oracle over the causal ball/sphere; requires n_dirs >= 100.
numerics::SampleMin brute_force_min(const QuadraticForm& q, int n_dirs, int n_radii,
                                    bool sphere_only, uint64_t seed = numerics::kDefaultSeed);

// Aggregation used by classify: worst margin wins; any violation dominates.
struct Aggregate {
  Status status = Status::holds;
  double worst_margin = 0;
  int worst_point = -1;
  RVec witness;
};

Aggregate aggregate_verdicts(const std::vector<ConditionVerdict>& per_point);

}  // namespace emtlab::energycond
