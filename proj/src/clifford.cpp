#include "emtlab/clifford.hpp"

#include <cmath>

namespace emtlab::clifford {

namespace {

const cplx kI(0, 1);

CMat pauli(int k) {
  CMat s(2, 2);
  switch (k) {
    case 1:
      s(0, 1) = 1;
      s(1, 0) = 1;
      break;
    case 2:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case 3:
      s(0, 0) = 1;
      s(1, 1) = -1;
      break;
    default:
      break;
  }
  return s;
}

// Product gamma_0 gamma_1 ... gamma_{m-1}; squares to +/-Id.
CMat volume_element(const std::vector<CMat>& gamma) {
  CMat p = CMat::identity(gamma[0].rows);
  for (const auto& g : gamma) p = p * g;
  return p;
}

std::vector<CMat> build_even(int m) {
  if (m == 2) return {pauli(1), pauli(2) * kI};
  std::vector<CMat> prev = build_even(m - 2);
  CMat id_prev = CMat::identity(prev[0].rows);
  std::vector<CMat> g;
  for (const auto& gm : prev) g.push_back(kron(gm, pauli(3)));
  g.push_back(kron(id_prev, pauli(1) * kI));
  g.push_back(kron(id_prev, pauli(2) * kI));
  return g;
}

}  // namespace

CliffordModel build_clifford_model(int m) {
  if (m < 2 || m > 8) fail(ErrorKind::parameter, "clifford model supports 2 <= m <= 8");
  CliffordModel model;
  model.m = m;
  model.even = (m % 2 == 0);

  if (model.even) {
    model.gamma = build_even(m);
  } else {
    model.gamma = build_even(m - 1);
    CMat p = volume_element(model.gamma);
    // choose c in {1, i} so that (c p)^2 = -Id; anti-Hermiticity follows
    cplx p2 = (p * p)(0, 0);
    cplx c = (std::abs(p2 - cplx(1, 0)) < 1e-9) ? kI : cplx(1, 0);
    model.gamma.push_back(p * c);
  }
  model.dim = model.gamma[0].rows;
  model.pairing = model.gamma[0];

  if (model.even) {
    CMat p = volume_element(model.gamma);
    cplx p2 = (p * p)(0, 0);
    cplx c = (std::abs(p2 + cplx(1, 0)) < 1e-9) ? kI : cplx(1, 0);
    model.chirality = p * c;
    CMat id = CMat::identity(model.dim);
    model.proj_plus = (id + model.chirality) * cplx(0.5, 0);
    model.proj_minus = (id - model.chirality) * cplx(0.5, 0);
  }
  return model;
}

double CliffordModel::invariant_residual() const {
  double res = 0;
  CMat id = CMat::identity(dim);
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = 0; nu < m; ++nu) {
      double eta = (mu == nu) ? (mu == 0 ? -1.0 : 1.0) : 0.0;
      CMat anti = gamma[mu] * gamma[nu] + gamma[nu] * gamma[mu] + id * cplx(2 * eta, 0);
      res = std::max(res, norm_fro(anti));
    }
    // symmetry of Clifford multiplication: gamma^dagger A = A gamma
    res = std::max(res, norm_fro(adjoint(gamma[mu]) * pairing - pairing * gamma[mu]));
  }
  // pairing Hermitian and invertible
  res = std::max(res, norm_fro(adjoint(pairing) - pairing));
  if (even) {
    res = std::max(res, norm_fro(chirality * chirality - id));
    for (int mu = 0; mu < m; ++mu)
      res = std::max(res, norm_fro(chirality * gamma[mu] + gamma[mu] * chirality));
    res = std::max(res, norm_fro(proj_plus * proj_plus - proj_plus));
    res = std::max(res, norm_fro(proj_plus + proj_minus - id));
  }
  return res;
}

CVec apply_spinor_matrix(const CMat& M, const CVec& psi, int dim_v) {
  const int ds = M.rows;
  if (static_cast<int>(psi.size()) != ds * dim_v)
    fail(ErrorKind::shape, "twisted spinor has wrong length for this model");
  CVec out(psi.size(), cplx(0));
  for (int s = 0; s < ds; ++s)
    for (int s2 = 0; s2 < ds; ++s2) {
      cplx c = M(s, s2);
      if (c == cplx(0)) continue;
      for (int v = 0; v < dim_v; ++v) out[s * dim_v + v] += c * psi[s2 * dim_v + v];
    }
  return out;
}

CVec apply_twist_matrix(const CMat& B, const CVec& psi, int dim_sigma) {
  const int dv = B.cols;
  if (static_cast<int>(psi.size()) != dim_sigma * dv)
    fail(ErrorKind::shape, "twisted spinor has wrong length for this twist space");
  CVec out(static_cast<size_t>(dim_sigma) * B.rows, cplx(0));
  for (int s = 0; s < dim_sigma; ++s)
    for (int r = 0; r < B.rows; ++r) {
      cplx acc(0);
      for (int c = 0; c < dv; ++c) acc += B(r, c) * psi[s * dv + c];
      out[s * B.rows + r] = acc;
    }
  return out;
}

cplx pair(const CliffordModel& model, const CVec& psi, const CVec& phi, int dim_v) {
  CVec a_phi = apply_spinor_matrix(model.pairing, phi, dim_v);
  return hdot(psi, a_phi);
}

CVec mult(const CliffordModel& model, const RVec& x_frame, const CVec& psi, int dim_v) {
  CVec out(psi.size(), cplx(0));
  for (int mu = 0; mu < model.m; ++mu) {
    if (x_frame[mu] == 0) continue;
    CVec term = apply_spinor_matrix(model.gamma[mu], psi, dim_v);
    for (size_t i = 0; i < out.size(); ++i) out[i] += x_frame[mu] * term[i];
  }
  return out;
}

int chirality_tag(const CliffordModel& model, const CVec& psi, int dim_v_plus, int dim_v_minus,
                  double tol) {
  if (!model.even || dim_v_minus < 0) return 0;
  const int dv = dim_v_plus + dim_v_minus;
  double total = norm2(psi);
  if (total == 0) return 0;
  CVec p_plus = apply_spinor_matrix(model.proj_plus, psi, dv);
  CVec p_minus = apply_spinor_matrix(model.proj_minus, psi, dv);
  auto twist_part = [&](const CVec& v, bool plus_block) {
    double s = 0;
    for (int si = 0; si < model.dim; ++si)
      for (int vi = 0; vi < dv; ++vi) {
        bool in_plus = vi < dim_v_plus;
        if (in_plus == plus_block) s += std::norm(v[si * dv + vi]);
      }
    return std::sqrt(s);
  };
  double mixed_for_plus = twist_part(p_minus, true) + twist_part(p_plus, false);
  double mixed_for_minus = twist_part(p_plus, true) + twist_part(p_minus, false);
  if (mixed_for_plus <= tol * total) return +1;
  if (mixed_for_minus <= tol * total) return -1;
  return 0;
}

DiracResult dirac_apply(const CliffordModel& model, const SpinorJet& jet) {
  if (static_cast<int>(jet.nabla.size()) != model.m)
    fail(ErrorKind::shape, "spinor jet must carry one derivative per frame direction");
  DiracResult r;
  r.value.assign(jet.value.size(), cplx(0));
  for (int mu = 0; mu < model.m; ++mu) {
    double eta_inv = (mu == 0) ? -1.0 : 1.0;
    CVec term = apply_spinor_matrix(model.gamma[mu], jet.nabla[mu], jet.dim_v);
    for (size_t i = 0; i < r.value.size(); ++i) r.value[i] += eta_inv * term[i];
  }
  r.tag = -jet.tag;
  return r;
}

}  // namespace emtlab::clifford
