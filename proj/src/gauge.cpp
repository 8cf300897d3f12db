#include "emtlab/gauge.hpp"

#include <cmath>

namespace emtlab::gauge {

namespace {

const cplx kI(0, 1);

std::vector<CMat> pauli_matrices() {
  CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1(0, 1) = 1;
  s1(1, 0) = 1;
  s2(0, 1) = -kI;
  s2(1, 0) = kI;
  s3(0, 0) = 1;
  s3(1, 1) = -1;
  return {s1, s2, s3};
}

std::vector<CMat> gell_mann_matrices() {
  std::vector<CMat> l(8, CMat(3, 3));
  l[0](0, 1) = 1; l[0](1, 0) = 1;
  l[1](0, 1) = -kI; l[1](1, 0) = kI;
  l[2](0, 0) = 1; l[2](1, 1) = -1;
  l[3](0, 2) = 1; l[3](2, 0) = 1;
  l[4](0, 2) = -kI; l[4](2, 0) = kI;
  l[5](1, 2) = 1; l[5](2, 1) = 1;
  l[6](1, 2) = -kI; l[6](2, 1) = kI;
  double r3 = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = r3; l[7](1, 1) = r3; l[7](2, 2) = -2 * r3;
  return l;
}

struct Factor {
  std::vector<CMat> basis;
  double dual_factor;
};

Factor build_factor(const std::string& name) {
  if (name == "u1") {
    CMat xi(1, 1);
    xi(0, 0) = kI;
    return {{xi}, 1.0};
  }
  if (name == "su2") {
    Factor f;
    for (const auto& s : pauli_matrices()) f.basis.push_back(s * (-kI * 0.5));
    f.dual_factor = 2.0;
    return f;
  }
  if (name == "su3") {
    Factor f;
    for (const auto& l : gell_mann_matrices()) f.basis.push_back(l * (-kI * 0.5));
    f.dual_factor = 2.0;
    return f;
  }
  fail(ErrorKind::parameter, "unsupported Lie algebra factor: " + name);
}

numerics::Field complex_field_as_real(const std::function<CVec(const RVec&)>& f) {
  return [f](const RVec& x) {
    CVec v = f(x);
    RVec r(2 * v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      r[2 * i] = v[i].real();
      r[2 * i + 1] = v[i].imag();
    }
    return r;
  };
}

CVec grad_column_complex(const RMat& grad, int axis, int n) {
  CVec out(n);
  for (int i = 0; i < n; ++i) out[i] = cplx(grad(2 * i, axis), grad(2 * i + 1, axis));
  return out;
}

numerics::Field connection_as_real(const FieldConfig& cfg) {
  return [&cfg](const RVec& x) {
    auto a = cfg.connection_at(x);
    RVec r;
    r.reserve(a.size() * a[0].size());
    for (const auto& comp : a)
      for (double v : comp) r.push_back(v);
    return r;
  };
}

}  // namespace

RVec LieAlgebraModel::bracket(const RVec& u, const RVec& v) const {
  RVec out(dim_g, 0.0);
  for (int a = 0; a < dim_g; ++a) {
    if (u[a] == 0) continue;
    for (int b = 0; b < dim_g; ++b) {
      if (v[b] == 0) continue;
      for (int c = 0; c < dim_g; ++c) out[c] += u[a] * v[b] * f(a, b, c);
    }
  }
  return out;
}

CMat LieAlgebraModel::matrix(const RVec& u) const {
  CMat z(def_dim, def_dim);
  for (int a = 0; a < dim_g; ++a) {
    if (u[a] == 0) continue;
    for (int i = 0; i < def_dim; ++i)
      for (int j = 0; j < def_dim; ++j) z(i, j) += u[a] * basis[a](i, j);
  }
  return z;
}

RVec LieAlgebraModel::coords(const CMat& z) const {
  RVec out(dim_g);
  for (int a = 0; a < dim_g; ++a) {
    cplx tr(0);
    for (int i = 0; i < def_dim; ++i)
      for (int j = 0; j < def_dim; ++j) tr += basis[a](i, j) * z(j, i);
    out[a] = -dual_factor[a] * tr.real();
  }
  return out;
}

double LieAlgebraModel::ad_invariance_residual() const {
  double res = 0;
  for (int a = 0; a < dim_g; ++a)
    for (int b = 0; b < dim_g; ++b)
      for (int c = 0; c < dim_g; ++c) res = std::max(res, std::abs(f(a, b, c) + f(a, c, b)));
  return res;
}

LieAlgebraModel build_lie_algebra(const std::vector<std::string>& factors) {
  if (factors.empty()) fail(ErrorKind::parameter, "empty Lie algebra factor list");
  std::vector<Factor> parts;
  int def_dim = 0, dim_g = 0;
  std::string name;
  for (const auto& fac : factors) {
    parts.push_back(build_factor(fac));
    def_dim += parts.back().basis[0].rows;
    dim_g += static_cast<int>(parts.back().basis.size());
    if (!name.empty()) name += "+";
    name += fac;
  }
  LieAlgebraModel alg;
  alg.name = name;
  alg.dim_g = dim_g;
  alg.def_dim = def_dim;
  int offset = 0;
  for (const auto& part : parts) {
    int bd = part.basis[0].rows;
    for (const auto& xi : part.basis) {
      CMat embedded(def_dim, def_dim);
      for (int i = 0; i < bd; ++i)
        for (int j = 0; j < bd; ++j) embedded(offset + i, offset + j) = xi(i, j);
      alg.basis.push_back(embedded);
      alg.dual_factor.push_back(part.dual_factor);
    }
    offset += bd;
  }
  alg.structure.assign(static_cast<size_t>(dim_g) * dim_g * dim_g, 0.0);
  for (int a = 0; a < dim_g; ++a)
    for (int b = 0; b < dim_g; ++b) {
      CMat br = alg.basis[a] * alg.basis[b] - alg.basis[b] * alg.basis[a];
      RVec coords = alg.coords(br);
      for (int c = 0; c < dim_g; ++c)
        alg.structure[(static_cast<size_t>(a) * dim_g + b) * dim_g + c] = coords[c];
    }
  return alg;
}

CMat RepresentationModel::rho_of(const RVec& u) const {
  CMat z(dim_w, dim_w);
  for (size_t a = 0; a < rho.size(); ++a) {
    if (u[a] == 0) continue;
    for (int i = 0; i < dim_w; ++i)
      for (int j = 0; j < dim_w; ++j) z(i, j) += u[a] * rho[a](i, j);
  }
  return z;
}

CMat RepresentationModel::chi_of(const RVec& u) const {
  const int dv = dim_v();
  CMat z(dv, dv);
  for (size_t a = 0; a < chi.size(); ++a) {
    if (u[a] == 0) continue;
    for (int i = 0; i < dv; ++i)
      for (int j = 0; j < dv; ++j) z(i, j) += u[a] * chi[a](i, j);
  }
  return z;
}

double RepresentationModel::unitarity_residual() const {
  double res = 0;
  for (const auto& r : rho) res = std::max(res, norm_fro(adjoint(r) + r));
  for (const auto& c : chi) {
    res = std::max(res, norm_fro(adjoint(c) + c));
    for (int i = 0; i < dim_v_plus; ++i)
      for (int j = dim_v_plus; j < dim_v(); ++j)
        res = std::max(res, std::max(std::abs(c(i, j)), std::abs(c(j, i))));
  }
  return res;
}

RepresentationModel rep_trivial(const LieAlgebraModel& alg, int dim_w, int dim_v_plus,
                                int dim_v_minus) {
  RepresentationModel rep;
  rep.dim_w = dim_w;
  rep.dim_v_plus = dim_v_plus;
  rep.dim_v_minus = dim_v_minus;
  rep.rho.assign(alg.dim_g, CMat(dim_w, dim_w));
  rep.chi.assign(alg.dim_g, CMat(rep.dim_v(), rep.dim_v()));
  return rep;
}

RepresentationModel rep_u1_charge(const LieAlgebraModel& alg, double q_w, int dim_w,
                                  double q_v_plus, int dim_v_plus, double q_v_minus,
                                  int dim_v_minus) {
  if (alg.dim_g != 1) fail(ErrorKind::parameter, "u1 charge representation needs a 1d algebra");
  RepresentationModel rep = rep_trivial(alg, dim_w, dim_v_plus, dim_v_minus);
  for (int i = 0; i < dim_w; ++i) rep.rho[0](i, i) = kI * q_w;
  for (int i = 0; i < dim_v_plus; ++i) rep.chi[0](i, i) = kI * q_v_plus;
  for (int i = 0; i < dim_v_minus; ++i) rep.chi[0](dim_v_plus + i, dim_v_plus + i) = kI * q_v_minus;
  return rep;
}

RepresentationModel rep_su2_fundamental(const LieAlgebraModel& alg) {
  if (alg.name != "su2") fail(ErrorKind::parameter, "su2 fundamental preset needs the su2 algebra");
  RepresentationModel rep;
  rep.dim_w = 2;
  rep.rho = alg.basis;
  rep.dim_v_plus = rep.dim_v_minus = 0;
  rep.chi.assign(alg.dim_g, CMat(0, 0));
  return rep;
}

void Potential::validate() const {
  if (lambda < 0 || mu < 0) fail(ErrorKind::parameter, "potential parameters must be non-negative");
  if (kind == Kind::mexican_hat && lambda == 0 && mu > 0)
    fail(ErrorKind::parameter, "mexican hat potential with lambda = 0 and mu > 0 is undefined");
}

PotentialValue potential_eval(const Potential& pot, const CVec& phi, int m,
                              std::optional<double> scal) {
  pot.validate();
  PotentialValue out;
  out.grad.assign(phi.size(), cplx(0));
  double phi2 = 0;
  for (const auto& c : phi) phi2 += std::norm(c);
  switch (pot.kind) {
    case Potential::Kind::none:
      break;
    case Potential::Kind::mexican_hat: {
      if (pot.lambda == 0) break;  // mu = 0 too, so U = lambda/2 |phi|^4 = 0
      double v = phi2 - pot.mu / pot.lambda;
      out.U = 0.5 * pot.lambda * v * v;
      for (size_t i = 0; i < phi.size(); ++i) out.grad[i] = 2 * pot.lambda * v * phi[i];
      break;
    }
    case Potential::Kind::conformal: {
      if (!scal) fail(ErrorKind::insufficient_jet, "conformal potential needs the scalar curvature");
      double c = static_cast<double>(m - 2) / (4.0 * (m - 1));
      out.U = c * (*scal) * phi2 + 0.5 * pot.lambda * phi2 * phi2;
      for (size_t i = 0; i < phi.size(); ++i)
        out.grad[i] = (2 * c * (*scal) + 2 * pot.lambda * phi2) * phi[i];
      break;
    }
  }
  return out;
}

CMat YukawaModel::twist_op(const CVec& phi) const {
  const int dv = dim_v_plus + dim_v_minus;
  CMat b(dv, dv);
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::mass:
      for (int i = 0; i < dv; ++i) b(i, i) = -kI * mass;
      break;
    case Kind::block:
      return twist_op_linear(phi);
  }
  return b;
}

CMat YukawaModel::twist_op_linear(const CVec& alpha) const {
  const int dv = dim_v_plus + dim_v_minus;
  CMat b(dv, dv);
  if (kind != Kind::block) return b;
  if (static_cast<int>(alpha.size()) != dim_w) fail(ErrorKind::shape, "yukawa: wrong Higgs dimension");
  CMat y(dim_v_minus, dim_v_plus);
  for (int k = 0; k < dim_w; ++k) {
    if (alpha[k] == cplx(0)) continue;
    if (blocks[k].rows != dim_v_minus || blocks[k].cols != dim_v_plus)
      fail(ErrorKind::shape, "yukawa block has wrong shape");
    for (int r = 0; r < dim_v_minus; ++r)
      for (int c = 0; c < dim_v_plus; ++c) y(r, c) += alpha[k] * blocks[k](r, c);
  }
  for (int r = 0; r < dim_v_minus; ++r)
    for (int c = 0; c < dim_v_plus; ++c) {
      b(dim_v_plus + r, c) = y(r, c);
      b(c, dim_v_plus + r) = -std::conj(y(r, c));
    }
  return b;
}

CVec yukawa_apply(const YukawaModel& yk, const CVec& phi, const CVec& psi, int dim_sigma) {
  return clifford::apply_twist_matrix(yk.twist_op(phi), psi, dim_sigma);
}

double yukawa_pair(const clifford::CliffordModel& model, const YukawaModel& yk, const CVec& phi,
                   const CVec& psi) {
  const int dv = yk.dim_v_plus + yk.dim_v_minus;
  CVec y_psi = yukawa_apply(yk, phi, psi, model.dim);
  for (auto& c : y_psi) c *= kI;
  return clifford::pair(model, psi, y_psi, dv).real();
}

CVec yukawa_dual(const clifford::CliffordModel& model, const YukawaModel& yk, const CVec& psi) {
  CVec j3(yk.dim_w, cplx(0));
  if (yk.kind != YukawaModel::Kind::block) return j3;
  const int dv = yk.dim_v_plus + yk.dim_v_minus;
  for (int k = 0; k < yk.dim_w; ++k) {
    CVec wk(yk.dim_w, cplx(0));
    wk[k] = 1;
    CVec ywk = clifford::apply_twist_matrix(yk.twist_op_linear(wk), psi, model.dim);
    for (auto& c : ywk) c *= kI;
    cplx re_part = clifford::pair(model, psi, ywk, dv);
    wk[k] = kI;
    CVec ywk_i = clifford::apply_twist_matrix(yk.twist_op_linear(wk), psi, model.dim);
    for (auto& c : ywk_i) c *= kI;
    cplx im_part = clifford::pair(model, psi, ywk_i, dv);
    j3[k] = 0.5 * re_part.real() + kI * 0.5 * im_part.real();
  }
  return j3;
}

std::vector<RVec> FieldConfig::connection_at(const RVec& x) const {
  if (connection) return connection(x);
  return std::vector<RVec>(m, RVec(algebra.dim_g, 0.0));
}

geometry::Frame FieldConfig::frame_at(const RVec& x) const {
  geometry::AdmData adm = metric.adm(x);
  if (spatial_basis.rows == m - 1) return geometry::build_frame_with_basis(adm, spatial_basis);
  return geometry::build_frame(adm);
}

std::vector<std::vector<RVec>> field_strength_coord(const FieldConfig& cfg, const RVec& x,
                                                    const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dg = cfg.algebra.dim_g;
  std::vector<std::vector<RVec>> f(m, std::vector<RVec>(m, RVec(dg, 0.0)));
  if (!cfg.has_connection()) return f;
  RMat da = numerics::fd_grad(connection_as_real(cfg), x, st);  // (b*dg + comp, a)
  auto a0 = cfg.connection_at(x);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      RVec fab(dg);
      for (int c = 0; c < dg; ++c) fab[c] = da(b * dg + c, a) - da(a * dg + c, b);
      fab = vadd(std::move(fab), cfg.algebra.bracket(a0[a], a0[b]));
      f[a][b] = fab;
      f[b][a] = vscale(fab, -1.0);
    }
  return f;
}

namespace {

// (nabla^2 Phi)_{ab} in coordinate indices, unsymmetrized.
std::vector<std::vector<CVec>> higgs_second_cov(const FieldConfig& cfg, const RVec& x,
                                                const numerics::Stencil& st,
                                                const std::vector<CVec>& dphi_coord) {
  const int m = cfg.m;
  const int dw = cfg.rep.dim_w;
  if (!cfg.metric.adm) fail(ErrorKind::insufficient_jet, "second covariant derivatives need an analytic metric");
  auto gamma = geometry::christoffels(cfg.metric, x, st);
  auto phi_field = complex_field_as_real(cfg.higgs);
  CVec phi0 = cfg.higgs(x);
  RMat dphi_raw = numerics::fd_grad(phi_field, x, st);
  auto hess = numerics::fd_hess(phi_field, x, st);
  auto a0 = cfg.connection_at(x);
  RMat da;
  if (cfg.has_connection()) da = numerics::fd_grad(connection_as_real(cfg), x, st);
  const int dg = cfg.algebra.dim_g;

  std::vector<std::vector<CVec>> dd(m, std::vector<CVec>(m, CVec(dw, cplx(0))));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      CVec v(dw, cplx(0));
      for (int i = 0; i < dw; ++i)
        v[i] = cplx(hess[2 * i](a, b), hess[2 * i + 1](a, b));
      if (cfg.has_connection()) {
        RVec da_ab(dg);  // d_a A_b
        for (int c = 0; c < dg; ++c) da_ab[c] = da(b * dg + c, a);
        CMat r_da = cfg.rep.rho_of(da_ab);
        CMat r_ab = cfg.rep.rho_of(a0[b]);
        CMat r_aa = cfg.rep.rho_of(a0[a]);
        CVec dphi_a = grad_column_complex(dphi_raw, a, dw);
        v = vadd(std::move(v), r_da * phi0);
        v = vadd(std::move(v), r_ab * dphi_a);
        v = vadd(std::move(v), r_aa * dphi_coord[b]);
      }
      for (int c = 0; c < m; ++c) {
        double gcoef = gamma[c](a, b);
        if (gcoef == 0) continue;
        for (int i = 0; i < dw; ++i) v[i] -= gcoef * dphi_coord[c][i];
      }
      dd[a][b] = std::move(v);
    }
  return dd;
}

std::vector<CVec> higgs_first_cov(const FieldConfig& cfg, const RVec& x,
                                  const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dw = cfg.rep.dim_w;
  auto phi_field = complex_field_as_real(cfg.higgs);
  CVec phi0 = cfg.higgs(x);
  RMat dphi_raw = numerics::fd_grad(phi_field, x, st);
  auto a0 = cfg.connection_at(x);
  std::vector<CVec> dphi(m);
  for (int a = 0; a < m; ++a) {
    CVec v = grad_column_complex(dphi_raw, a, dw);
    if (cfg.has_connection()) v = vadd(std::move(v), cfg.rep.rho_of(a0[a]) * phi0);
    dphi[a] = std::move(v);
  }
  return dphi;
}

}  // namespace

std::vector<CVec> higgs_cov_deriv_coord(const FieldConfig& cfg, const RVec& x,
                                        const numerics::Stencil& st) {
  return higgs_first_cov(cfg, x, st);
}

std::vector<CMat> spin_connection(const FieldConfig& cfg, const RVec& x,
                                  const numerics::Stencil& st) {
  const int m = cfg.m;
  const int ds = cfg.cliff.dim;
  RMat g = cfg.metric.metric(x);
  auto gamma = geometry::christoffels(cfg.metric, x, st);
  numerics::Field frame_field = [&](const RVec& p) {
    geometry::Frame fr = cfg.frame_at(p);
    return fr.vectors.a;
  };
  RMat de = numerics::fd_grad(frame_field, x, st);  // (mu*m + b, a)
  geometry::Frame fr0 = cfg.frame_at(x);

  // omega_{a mu nu} = g(nabla_a e_mu, e_nu)
  std::vector<RMat> omega(m, RMat(m, m));
  for (int a = 0; a < m; ++a)
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        double v = 0;
        for (int b = 0; b < m; ++b) {
          double cov = de(mu * m + b, a);
          for (int c = 0; c < m; ++c) cov += gamma[b](a, c) * fr0.vectors(mu, c);
          for (int c = 0; c < m; ++c) v += cov * g(b, c) * fr0.vectors(nu, c);
        }
        omega[a](mu, nu) = v;
      }

  std::vector<CMat> sigma(m, CMat(ds, ds));
  for (int a = 0; a < m; ++a)
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        double w = omega[a](mu, nu);
        if (std::abs(w) < 1e-300) continue;
        double raise = ((mu == 0) ? -1.0 : 1.0) * ((nu == 0) ? -1.0 : 1.0);
        CMat gg = cfg.cliff.gamma[mu] * cfg.cliff.gamma[nu];
        sigma[a] = sigma[a] + gg * cplx(0.25 * raise * w, 0);
      }
  return sigma;
}

std::vector<CVec> spinor_cov_deriv(const FieldConfig& cfg,
                                   const std::function<CVec(const RVec&)>& field, const RVec& x,
                                   const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dv = std::max(1, cfg.rep.dim_v());
  CVec psi0 = field(x);
  const int n = static_cast<int>(psi0.size());
  RMat dpsi = numerics::fd_grad(complex_field_as_real(field), x, st);
  auto sigma = spin_connection(cfg, x, st);
  auto a0 = cfg.connection_at(x);
  std::vector<CVec> out(m);
  for (int a = 0; a < m; ++a) {
    CVec v = grad_column_complex(dpsi, a, n);
    v = vadd(std::move(v), clifford::apply_spinor_matrix(sigma[a], psi0, dv));
    if (cfg.has_connection() && cfg.rep.dim_v() > 0)
      v = vadd(std::move(v), clifford::apply_twist_matrix(cfg.rep.chi_of(a0[a]), psi0, cfg.cliff.dim));
    out[a] = std::move(v);
  }
  return out;
}

CVec dirac_of_fields(const FieldConfig& cfg, const std::function<CVec(const RVec&)>& field,
                     const RVec& x, const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dv = std::max(1, cfg.rep.dim_v());
  auto nabla = spinor_cov_deriv(cfg, field, x, st);
  geometry::Frame fr = cfg.frame_at(x);
  CVec out(field(x).size(), cplx(0));
  for (int mu = 0; mu < m; ++mu) {
    CVec nabla_mu(out.size(), cplx(0));
    for (int a = 0; a < m; ++a) {
      double c = fr.vectors(mu, a);
      if (c == 0) continue;
      for (size_t i = 0; i < out.size(); ++i) nabla_mu[i] += c * nabla[a][i];
    }
    double eta_inv = (mu == 0) ? -1.0 : 1.0;
    CVec term = clifford::apply_spinor_matrix(cfg.cliff.gamma[mu], nabla_mu, dv);
    for (size_t i = 0; i < out.size(); ++i) out[i] += eta_inv * term[i];
  }
  return out;
}

GaugeJet covariant_jet(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st,
                       int depth) {
  const int m = cfg.m;
  GaugeJet jet;
  jet.m = m;
  jet.frame = cfg.frame_at(x);
  const auto& e = jet.frame.vectors;

  auto a_coord = cfg.connection_at(x);
  auto f_coord = field_strength_coord(cfg, x, st);
  const int dg = cfg.algebra.dim_g;
  jet.A.assign(m, RVec(dg, 0.0));
  jet.F.assign(m, std::vector<RVec>(m, RVec(dg, 0.0)));
  for (int mu = 0; mu < m; ++mu)
    for (int a = 0; a < m; ++a) {
      if (e(mu, a) == 0) continue;
      for (int c = 0; c < dg; ++c) jet.A[mu][c] += e(mu, a) * a_coord[a][c];
    }
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      RVec f(dg, 0.0);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double w = e(mu, a) * e(nu, b);
          if (w == 0) continue;
          for (int c = 0; c < dg; ++c) f[c] += w * f_coord[a][b][c];
        }
      jet.F[mu][nu] = f;
      jet.F[nu][mu] = vscale(f, -1.0);
    }

  if (cfg.has_higgs()) {
    jet.has_phi = true;
    jet.phi = cfg.higgs(x);
    auto dphi_coord = higgs_first_cov(cfg, x, st);
    jet.dphi.assign(m, CVec(cfg.rep.dim_w, cplx(0)));
    for (int mu = 0; mu < m; ++mu)
      for (int a = 0; a < m; ++a) {
        if (e(mu, a) == 0) continue;
        for (int i = 0; i < cfg.rep.dim_w; ++i) jet.dphi[mu][i] += e(mu, a) * dphi_coord[a][i];
      }
    if (depth >= 2) {
      jet.has_depth2 = true;
      auto dd_coord = higgs_second_cov(cfg, x, st, dphi_coord);
      jet.ddphi.assign(m, std::vector<CVec>(m, CVec(cfg.rep.dim_w, cplx(0))));
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu)
          for (int a = 0; a < m; ++a) {
            if (e(mu, a) == 0) continue;
            for (int b = 0; b < m; ++b) {
              double w = e(mu, a) * e(nu, b);
              if (w == 0) continue;
              for (int i = 0; i < cfg.rep.dim_w; ++i) jet.ddphi[mu][nu][i] += w * dd_coord[a][b][i];
            }
          }
    }
  }

  if (cfg.has_spinor()) {
    jet.has_spinor = true;
    jet.psi.value = cfg.spinor(x);
    jet.psi.dim_v = std::max(1, cfg.rep.dim_v());
    auto nabla_coord = spinor_cov_deriv(cfg, cfg.spinor, x, st);
    jet.psi.nabla.assign(m, CVec(jet.psi.value.size(), cplx(0)));
    for (int mu = 0; mu < m; ++mu)
      for (int a = 0; a < m; ++a) {
        if (e(mu, a) == 0) continue;
        for (size_t i = 0; i < jet.psi.value.size(); ++i)
          jet.psi.nabla[mu][i] += e(mu, a) * nabla_coord[a][i];
      }
    jet.psi.tag = clifford::chirality_tag(cfg.cliff, jet.psi.value, cfg.rep.dim_v_plus,
                                          cfg.rep.dim_v_minus);
  }
  return jet;
}

EBSplit eb_split(const std::vector<std::vector<RVec>>& f_frame, int dim_g) {
  const int m = static_cast<int>(f_frame.size());
  EBSplit s;
  s.electric.assign(m - 1, RVec(dim_g, 0.0));
  s.magnetic.assign(m - 1, std::vector<RVec>(m - 1, RVec(dim_g, 0.0)));
  for (int i = 0; i < m - 1; ++i) {
    s.electric[i] = f_frame[0][i + 1];
    s.norm2_e += dot(s.electric[i], s.electric[i]);
    for (int j = 0; j < m - 1; ++j) s.magnetic[i][j] = f_frame[i + 1][j + 1];
  }
  for (int i = 0; i < m - 1; ++i)
    for (int j = i + 1; j < m - 1; ++j) s.norm2_b += dot(s.magnetic[i][j], s.magnetic[i][j]);
  return s;
}

Currents currents(const GaugeJet& jet, const FieldConfig& cfg) {
  const int m = jet.m;
  const int dg = cfg.algebra.dim_g;
  Currents cur;
  cur.j1.assign(m, RVec(dg, 0.0));
  cur.j2.assign(m, RVec(dg, 0.0));
  cur.j3.assign(cfg.rep.dim_w, cplx(0));
  if (jet.has_phi) {
    for (int mu = 0; mu < m; ++mu)
      for (int a = 0; a < dg; ++a) {
        CVec rho_phi = cfg.rep.rho[a] * jet.phi;
        cur.j1[mu][a] = -hdot(jet.dphi[mu], rho_phi).real();
      }
  }
  if (jet.has_spinor) {
    const int dv = jet.psi.dim_v;
    for (int mu = 0; mu < m; ++mu) {
      RVec e_mu(m, 0.0);
      e_mu[mu] = 1;
      CVec cpsi = clifford::mult(cfg.cliff, e_mu, jet.psi.value, dv);
      for (int a = 0; a < dg; ++a) {
        if (cfg.rep.dim_v() == 0) continue;
        CVec chi_psi = clifford::apply_twist_matrix(cfg.rep.chi[a], jet.psi.value, cfg.cliff.dim);
        cur.j2[mu][a] = 0.5 * clifford::pair(cfg.cliff, cpsi, chi_psi, dv).imag();
      }
    }
    cur.j3 = yukawa_dual(cfg.cliff, cfg.yukawa, jet.psi.value);
  }
  return cur;
}

std::vector<RVec> d_omega_star_f(const FieldConfig& cfg, const RVec& x,
                                 const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dg = cfg.algebra.dim_g;
  std::vector<RVec> out(m, RVec(dg, 0.0));
  if (!cfg.has_connection()) return out;
  auto gamma = geometry::christoffels(cfg.metric, x, st);
  RMat ginv = inverse(cfg.metric.metric(x));
  numerics::Field f_field = [&](const RVec& p) {
    auto f = field_strength_coord(cfg, p, st);
    RVec flat;
    flat.reserve(static_cast<size_t>(m) * m * dg);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < dg; ++c) flat.push_back(f[a][b][c]);
    return flat;
  };
  RMat df = numerics::fd_grad(f_field, x, st);
  auto f0 = field_strength_coord(cfg, x, st);
  auto a0 = cfg.connection_at(x);

  std::vector<RVec> dstar_coord(m, RVec(dg, 0.0));
  for (int nu = 0; nu < m; ++nu) {
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a) {
        double w = ginv(c, a);
        if (w == 0) continue;
        RVec nab(dg);
        for (int k = 0; k < dg; ++k) nab[k] = df((a * m + nu) * dg + k, c);
        for (int d = 0; d < m; ++d) {
          double g1 = gamma[d](c, a), g2 = gamma[d](c, nu);
          if (g1 != 0)
            for (int k = 0; k < dg; ++k) nab[k] -= g1 * f0[d][nu][k];
          if (g2 != 0)
            for (int k = 0; k < dg; ++k) nab[k] -= g2 * f0[a][d][k];
        }
        nab = vadd(std::move(nab), cfg.algebra.bracket(a0[c], f0[a][nu]));
        for (int k = 0; k < dg; ++k) dstar_coord[nu][k] -= w * nab[k];
      }
  }
  geometry::Frame fr = cfg.frame_at(x);
  for (int mu = 0; mu < m; ++mu)
    for (int b = 0; b < m; ++b) {
      double w = fr.vectors(mu, b);
      if (w == 0) continue;
      for (int k = 0; k < dg; ++k) out[mu][k] += w * dstar_coord[b][k];
    }
  return out;
}

CVec box_phi(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st) {
  const int m = cfg.m;
  const int dw = cfg.rep.dim_w;
  auto dphi_coord = higgs_first_cov(cfg, x, st);
  auto dd = higgs_second_cov(cfg, x, st, dphi_coord);
  RMat ginv = inverse(cfg.metric.metric(x));
  CVec out(dw, cplx(0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double w = ginv(a, b);
      if (w == 0) continue;
      for (int i = 0; i < dw; ++i) out[i] += w * dd[a][b][i];
    }
  return out;
}

double ElResiduals::norm_yang_mills() const {
  double s = 0;
  for (const auto& r : yang_mills) s += dot(r, r);
  return std::sqrt(s);
}

ElResiduals el_residuals(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st) {
  const int m = cfg.m;
  ElResiduals res;
  GaugeJet jet = covariant_jet(cfg, x, st, 1);
  Currents cur = currents(jet, cfg);

  res.yang_mills = d_omega_star_f(cfg, x, st);
  for (int mu = 0; mu < m; ++mu)
    res.yang_mills[mu] = vsub(vsub(std::move(res.yang_mills[mu]), cur.j1[mu]), cur.j2[mu]);

  if (cfg.has_higgs()) {
    std::optional<double> scal;
    if (cfg.potential.kind == Potential::Kind::conformal)
      scal = geometry::curvature_package(cfg.metric, x, st).scal;
    auto pv = potential_eval(cfg.potential, jet.phi, m, scal);
    res.higgs = box_phi(cfg, x, st);
    for (int i = 0; i < cfg.rep.dim_w; ++i) res.higgs[i] -= 0.5 * pv.grad[i] + cur.j3[i];
  }

  if (cfg.has_spinor()) {
    res.dirac = dirac_of_fields(cfg, cfg.spinor, x, st);
    CVec phi0 = cfg.has_higgs() ? cfg.higgs(x) : CVec(cfg.rep.dim_w, cplx(0));
    CVec y_psi = yukawa_apply(cfg.yukawa, phi0, jet.psi.value, cfg.cliff.dim);
    res.dirac = vadd(std::move(res.dirac), y_psi);
  }
  return res;
}

double weitzenboeck_residual(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st) {
  if (!cfg.has_spinor()) fail(ErrorKind::insufficient_jet, "weitzenboeck check needs a spinor field");
  const int m = cfg.m;
  const int dv = std::max(1, cfg.rep.dim_v());
  CVec psi0 = cfg.spinor(x);
  const int n = static_cast<int>(psi0.size());

  auto dirac_field = [&](const RVec& p) { return dirac_of_fields(cfg, cfg.spinor, p, st); };
  CVec d2 = dirac_of_fields(cfg, dirac_field, x, st);

  // box Psi = g^{ab} (nabla^2 Psi)_{ab} via one nested derivative of the
  // coordinate-index covariant derivative field
  auto nabla_field = [&](const RVec& p) {
    auto nb = spinor_cov_deriv(cfg, cfg.spinor, p, st);
    CVec flat;
    flat.reserve(static_cast<size_t>(m) * n);
    for (const auto& comp : nb) flat.insert(flat.end(), comp.begin(), comp.end());
    return flat;
  };
  RMat dn = numerics::fd_grad(complex_field_as_real(nabla_field), x, st);
  auto nabla0 = spinor_cov_deriv(cfg, cfg.spinor, x, st);
  auto sigma = spin_connection(cfg, x, st);
  auto gamma = geometry::christoffels(cfg.metric, x, st);
  auto a0 = cfg.connection_at(x);
  RMat ginv = inverse(cfg.metric.metric(x));

  CVec box(n, cplx(0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double w = ginv(a, b);
      if (w == 0) continue;
      CVec dd = grad_column_complex(dn, a, m * n);
      CVec nab(dd.begin() + b * n, dd.begin() + (b + 1) * n);
      nab = vadd(std::move(nab), clifford::apply_spinor_matrix(sigma[a], nabla0[b], dv));
      if (cfg.has_connection() && cfg.rep.dim_v() > 0)
        nab = vadd(std::move(nab),
                   clifford::apply_twist_matrix(cfg.rep.chi_of(a0[a]), nabla0[b], cfg.cliff.dim));
      for (int c = 0; c < m; ++c) {
        double gc = gamma[c](a, b);
        if (gc == 0) continue;
        for (int i = 0; i < n; ++i) nab[i] -= gc * nabla0[c][i];
      }
      for (int i = 0; i < n; ++i) box[i] += w * nab[i];
    }

  double scal = geometry::curvature_package(cfg.metric, x, st).scal;

  // (1/2) gamma^mu gamma^nu chi(F_{mu nu}) Psi in frame indices
  GaugeJet jet = covariant_jet(cfg, x, st, 1);
  CVec fterm(n, cplx(0));
  if (cfg.has_connection() && cfg.rep.dim_v() > 0) {
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        if (mu == nu) continue;
        double raise = ((mu == 0) ? -1.0 : 1.0) * ((nu == 0) ? -1.0 : 1.0);
        CVec chi_psi = clifford::apply_twist_matrix(cfg.rep.chi_of(jet.F[mu][nu]), psi0, cfg.cliff.dim);
        CVec gg = clifford::apply_spinor_matrix(cfg.cliff.gamma[mu] * cfg.cliff.gamma[nu], chi_psi, dv);
        for (int i = 0; i < n; ++i) fterm[i] += 0.5 * raise * gg[i];
      }
  }

  CVec rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = -box[i] + 0.25 * scal * psi0[i] + fterm[i];
  double res = 0;
  for (int i = 0; i < n; ++i) res += std::norm(d2[i] - rhs[i]);
  return std::sqrt(res);
}

}  // namespace emtlab::gauge
