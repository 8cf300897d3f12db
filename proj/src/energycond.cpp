#include "emtlab/energycond.hpp"

#include <cmath>

namespace emtlab::energycond {

namespace {

constexpr double kPsdTol = 1e-12;
constexpr double kBottomTol = 1e-12;

struct EigenSplit {
  EigSym eig;
  RVec beta;  // Q^T b
};

EigenSplit split(const QuadraticForm& q) {
  EigenSplit s;
  s.eig = eigh(q.A);
  const int n = q.dim();
  s.beta.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) s.beta[i] += s.eig.vectors(r, i) * q.b[r];
  return s;
}

RVec assemble(const EigSym& eig, const RVec& xi_eigen) {
  const int n = static_cast<int>(xi_eigen.size());
  RVec xi(n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) xi[r] += eig.vectors(r, i) * xi_eigen[i];
  return xi;
}

double kkt_residual_of(const QuadraticForm& q, const RVec& xi, double nu) {
  RVec r = q.A * xi;
  for (int i = 0; i < q.dim(); ++i) r[i] += nu * xi[i] + q.b[i];
  return norm2(r);
}

}  // namespace

double QuadraticForm::eval(const RVec& xi) const {
  double v = c + 2 * dot(b, xi);
  RVec axi = A * xi;
  return v + dot(xi, axi);
}

QuadraticForm QuadraticForm::from_tensor(const emt::EnergyMomentumTensor& t) {
  return from_matrix(t.comps, t.m);
}

QuadraticForm QuadraticForm::from_matrix(const RMat& full, int m) {
  QuadraticForm q;
  q.c = full(0, 0);
  q.b.assign(m - 1, 0.0);
  q.A = RMat(m - 1, m - 1);
  for (int i = 0; i < m - 1; ++i) {
    q.b[i] = 0.5 * (full(0, i + 1) + full(i + 1, 0));
    for (int j = 0; j < m - 1; ++j) q.A(i, j) = 0.5 * (full(i + 1, j + 1) + full(j + 1, i + 1));
  }
  return q;
}

BallMinResult minimize_quadratic_over_ball(const QuadraticForm& q, bool boundary_only) {
  const int n = q.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(q.A(i, j) - q.A(j, i)) > 1e-9)
        fail(ErrorKind::contract_violation, "quadratic form matrix must be symmetric");

  EigenSplit s = split(q);
  const double lambda_min = s.eig.values[0];

  if (!boundary_only && lambda_min >= -kPsdTol) {
    // interior stationary point, when consistent
    RVec xi_e(n, 0.0);
    bool consistent = true;
    for (int i = 0; i < n; ++i) {
      if (s.eig.values[i] > kPsdTol)
        xi_e[i] = -s.beta[i] / s.eig.values[i];
      else if (std::abs(s.beta[i]) > kBottomTol)
        consistent = false;
    }
    if (consistent && norm2(xi_e) <= 1.0 + 1e-14) {
      BallMinResult r;
      r.argmin = assemble(s.eig, xi_e);
      r.value = q.eval(r.argmin);
      r.boundary = false;
      r.multiplier = 0;
      r.kkt_residual = kkt_residual_of(q, r.argmin, 0.0);
      return r;
    }
  }

  const double nu_lo = boundary_only ? -lambda_min : std::max(0.0, -lambda_min);

  // components pinned at nu = nu_lo
  double regular_norm2 = 0;
  bool bottom_loaded = false;
  for (int i = 0; i < n; ++i) {
    double denom = s.eig.values[i] + nu_lo;
    if (denom <= kBottomTol) {
      if (std::abs(s.beta[i]) > kBottomTol) bottom_loaded = true;
    } else {
      regular_norm2 += (s.beta[i] / denom) * (s.beta[i] / denom);
    }
  }

  BallMinResult r;
  if (!bottom_loaded && regular_norm2 <= 1.0) {
    // hard case: complete along the bottom eigenspace to reach the sphere
    RVec xi_e(n, 0.0);
    int bottom_index = -1;
    for (int i = 0; i < n; ++i) {
      double denom = s.eig.values[i] + nu_lo;
      if (denom > kBottomTol)
        xi_e[i] = -s.beta[i] / denom;
      else if (bottom_index < 0)
        bottom_index = i;
    }
    double tau = std::sqrt(std::max(0.0, 1.0 - regular_norm2));
    if (bottom_index >= 0)
      xi_e[bottom_index] += tau;
    else if (tau > 1e-7)
      fail(ErrorKind::contract_violation, "ball solver: no direction available for completion");
    r.argmin = assemble(s.eig, xi_e);
    r.multiplier = nu_lo;
  } else {
    // secular equation: |xi(nu)|^2 = 1 with xi(nu) = -(A + nu I)^{-1} b
    auto phi = [&](double nu) {
      double t = 0;
      for (int i = 0; i < n; ++i) {
        double denom = s.eig.values[i] + nu;
        t += (s.beta[i] / denom) * (s.beta[i] / denom);
      }
      return t - 1.0;
    };
    auto dphi = [&](double nu) {
      double t = 0;
      for (int i = 0; i < n; ++i) {
        double denom = s.eig.values[i] + nu;
        t -= 2 * s.beta[i] * s.beta[i] / (denom * denom * denom);
      }
      return t;
    };
    double lo = nu_lo + 1e-14;
    double hi = std::max(lo * (1 + 1e-12), -lambda_min + norm2(q.b) + 1.0);
    while (phi(hi) > 0) hi = nu_lo + 2 * (hi - nu_lo);
    if (phi(lo) < 0) lo = nu_lo;  // root collapses onto nu_lo
    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
      if (phi(nu) > 0)
        lo = nu;
      else
        hi = nu;
      double nu_newton = nu - phi(nu) / dphi(nu);
      nu = (nu_newton > lo && nu_newton < hi) ? nu_newton : 0.5 * (lo + hi);
    }
    RVec xi_e(n);
    for (int i = 0; i < n; ++i) xi_e[i] = -s.beta[i] / (s.eig.values[i] + nu);
    r.argmin = assemble(s.eig, xi_e);
    r.multiplier = nu;
  }
  r.boundary = true;
  r.value = q.eval(r.argmin);
  r.kkt_residual = kkt_residual_of(q, r.argmin, r.multiplier);
  return r;
}

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::NEC: return "NEC";
    case Condition::WEC: return "WEC";
    case Condition::SEC: return "SEC";
    case Condition::DEC: return "DEC";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::violated: return "violated";
    case Status::inconclusive: return "inconclusive-numerical";
  }
  return "?";
}

namespace {

Status status_from_margin(double margin, double tol) {
  if (margin > tol) return Status::holds;
  if (margin < -tol) return Status::violated;
  return Status::inconclusive;
}

ConditionVerdict dec_verdict(const emt::EnergyMomentumTensor& t, double tol) {
  const int m = t.m;
  ConditionVerdict v;
  v.condition = Condition::DEC;

  QuadraticForm q = QuadraticForm::from_tensor(t);
  BallMinResult wec = minimize_quadratic_over_ball(q, false);

  // g(Z, Z) = (T eta T)(X, X) must stay <= 0 over the ball
  RMat eta = geometry::eta_matrix(m);
  RMat s2 = t.comps * eta * t.comps;
  QuadraticForm qz = QuadraticForm::from_matrix(-s2, m);
  BallMinResult causal = minimize_quadratic_over_ball(qz, false);
  double causal_margin = causal.value;  // = -max g(Z,Z)

  // g(Z, n) <= 0 is linear: min of c + b.xi over the ball
  double bn = norm2(q.b);
  double future_margin = q.c - bn;
  RVec future_witness(m - 1, 0.0);
  if (bn > 0)
    for (int i = 0; i < m - 1; ++i) future_witness[i] = -q.b[i] / bn;

  v.margin = wec.value;
  v.witness = wec.argmin;
  if (causal_margin < v.margin) {
    v.margin = causal_margin;
    v.witness = causal.argmin;
  }
  if (future_margin < v.margin) {
    v.margin = future_margin;
    v.witness = future_witness;
  }
  // degenerate Z = 0 counts as satisfying, so the band maps to holds
  v.status = (v.margin >= -tol) ? Status::holds : Status::violated;
  return v;
}

}  // namespace

ConditionVerdict check_condition(const emt::EnergyMomentumTensor& t, Condition cond, double tol) {
  if (t.symmetry_residual() > 1e-9)
    fail(ErrorKind::contract_violation, "energy-momentum tensor must be symmetric");
  if (cond == Condition::DEC) return dec_verdict(t, tol);

  ConditionVerdict v;
  v.condition = cond;
  emt::EnergyMomentumTensor work = t;
  if (cond == Condition::SEC) {
    double tr = t.trace_eta();
    RMat eta = geometry::eta_matrix(t.m);
    work.comps = t.comps - eta * (tr / (t.m - 2));
  }
  QuadraticForm q = QuadraticForm::from_tensor(work);
  BallMinResult r = minimize_quadratic_over_ball(q, cond == Condition::NEC);
  v.margin = r.value;
  v.witness = r.argmin;
  v.status = status_from_margin(v.margin, tol);
  return v;
}

std::vector<ConditionVerdict> check_all_conditions(const emt::EnergyMomentumTensor& t,
                                                   double tol) {
  return {check_condition(t, Condition::NEC, tol), check_condition(t, Condition::WEC, tol),
          check_condition(t, Condition::SEC, tol), check_condition(t, Condition::DEC, tol)};
}

double higgs_txx_completion(const CVec& dphi_n, const std::vector<CVec>& dphi_spatial, double u,
                            const RVec& xi) {
  double xi2 = dot(xi, xi);
  if (xi2 > 1 + 1e-12) fail(ErrorKind::parameter, "causal parameter must satisfy |xi| <= 1");
  double gamma = std::sqrt((1 + xi2) / 2);
  CVec dphi_xi(dphi_n.size(), cplx(0));
  double dphi_sp2 = 0;
  for (size_t i = 0; i < dphi_spatial.size(); ++i) {
    for (size_t k = 0; k < dphi_xi.size(); ++k) dphi_xi[k] += xi[i] * dphi_spatial[i][k];
    dphi_sp2 += hdot(dphi_spatial[i], dphi_spatial[i]).real();
  }
  CVec comb(dphi_n.size());
  for (size_t k = 0; k < comb.size(); ++k) comb[k] = gamma * dphi_n[k] + dphi_xi[k] / gamma;
  double sq = hdot(comb, comb).real();
  double dphi_xi2 = hdot(dphi_xi, dphi_xi).real();
  return sq + 0.5 * (1 - xi2) * (dphi_sp2 - dphi_xi2 / (gamma * gamma) + u);
}

namespace {

struct YmSplitData {
  int d = 0;
  double xi2 = 0;
  std::vector<RVec> h;       // H_i = -(xi_i/|xi|^2) E(xi) + (xi . B)_i
  RVec e_xi;                 // E(xi), g-coordinates
  double e_xi2 = 0, xib2 = 0, e2 = 0, b2 = 0;
};

YmSplitData ym_split_data(const gauge::EBSplit& eb, const RVec& xi) {
  YmSplitData d;
  d.d = static_cast<int>(eb.electric.size());
  d.xi2 = dot(xi, xi);
  if (d.xi2 > 1 + 1e-12) fail(ErrorKind::parameter, "causal parameter must satisfy |xi| <= 1");
  const int dg = static_cast<int>(eb.electric[0].size());
  d.e_xi.assign(dg, 0.0);
  for (int i = 0; i < d.d; ++i)
    for (int c = 0; c < dg; ++c) d.e_xi[c] += xi[i] * eb.electric[i][c];
  d.e_xi2 = dot(d.e_xi, d.e_xi);
  d.e2 = eb.norm2_e;
  d.b2 = eb.norm2_b;
  d.h.assign(d.d, RVec(dg, 0.0));
  for (int i = 0; i < d.d; ++i) {
    RVec xb(dg, 0.0);
    for (int j = 0; j < d.d; ++j)
      for (int c = 0; c < dg; ++c) xb[c] += xi[j] * eb.magnetic[j][i][c];
    d.xib2 += dot(xb, xb);
    for (int c = 0; c < dg; ++c) d.h[i][c] = xb[c] - xi[i] / d.xi2 * d.e_xi[c];
  }
  return d;
}

}  // namespace

double ym_txx_completion(const gauge::EBSplit& eb, const RVec& xi) {
  double xi2 = dot(xi, xi);
  if (xi2 == 0) return 0.5 * (eb.norm2_e + eb.norm2_b);
  YmSplitData d = ym_split_data(eb, xi);
  double gamma2 = (1 + xi2) / 2;
  double gamma = std::sqrt(gamma2);
  double sq = 0;
  for (int i = 0; i < d.d; ++i) {
    RVec comb = vadd(vscale(eb.electric[i], gamma), vscale(d.h[i], 1 / gamma));
    sq += dot(comb, comb);
  }
  return sq + (1 - xi2) / (1 + xi2) * d.e_xi2 + 0.5 * (1 - xi2) * (d.b2 - d.xib2 / gamma2);
}

double ym_sec_completion(const gauge::EBSplit& eb, const RVec& xi, int m) {
  double xi2 = dot(xi, xi);
  if (xi2 == 0) return eb.norm2_e + (-eb.norm2_e + eb.norm2_b) / (m - 2);
  YmSplitData d = ym_split_data(eb, xi);
  double kappa2 = (m - 3 + xi2) / (m - 2);
  double kappa = std::sqrt(kappa2);
  double sq = 0;
  for (int i = 0; i < d.d; ++i) {
    RVec comb = vadd(vscale(eb.electric[i], kappa), vscale(d.h[i], 1 / kappa));
    sq += dot(comb, comb);
  }
  return sq + (m - 4 + xi2) * (1 - xi2) / (xi2 * (m - 3 + xi2)) * d.e_xi2 +
         (1 - xi2) / (m - 2) * (d.b2 - d.xib2 / kappa2);
}

numerics::SampleMin brute_force_min(const QuadraticForm& q, int n_dirs, int n_radii,
                                    bool sphere_only, uint64_t seed) {
  if (n_dirs < 100) fail(ErrorKind::parameter, "brute_force_min needs at least 100 directions");
  auto fn = [&](const RVec& xi) { return q.eval(xi); };
  return numerics::sample_min(fn, q.dim(), n_dirs, n_radii, sphere_only, seed);
}

Aggregate aggregate_verdicts(const std::vector<ConditionVerdict>& per_point) {
  Aggregate agg;
  if (per_point.empty()) fail(ErrorKind::parameter, "cannot aggregate over an empty region");
  bool any_violated = false, any_inconclusive = false;
  agg.worst_margin = per_point[0].margin;
  agg.worst_point = 0;
  agg.witness = per_point[0].witness;
  for (size_t i = 0; i < per_point.size(); ++i) {
    const auto& v = per_point[i];
    if (v.margin < agg.worst_margin) {
      agg.worst_margin = v.margin;
      agg.worst_point = static_cast<int>(i);
      agg.witness = v.witness;
    }
    any_violated |= (v.status == Status::violated);
    any_inconclusive |= (v.status == Status::inconclusive);
  }
  agg.status = any_violated ? Status::violated
                            : (any_inconclusive ? Status::inconclusive : Status::holds);
  return agg;
}

}  // namespace emtlab::energycond
