#include "emtlab/emt.hpp"

#include <cmath>

namespace emtlab::emt {

namespace {

const cplx kI(0, 1);

double eta_factor(int mu) { return mu == 0 ? -1.0 : 1.0; }

double f_norm2_frame(const std::vector<std::vector<RVec>>& f, int m) {
  // |F|^2 = (1/2) <F_{mu nu}, F^{mu nu}>
  double s = 0;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu)
      s += 0.5 * eta_factor(mu) * eta_factor(nu) * dot(f[mu][nu], f[mu][nu]);
  return s;
}

double dphi_norm2_frame(const std::vector<CVec>& dphi, int m) {
  double s = 0;
  for (int mu = 0; mu < m; ++mu) s += eta_factor(mu) * hdot(dphi[mu], dphi[mu]).real();
  return s;
}

}  // namespace

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::yang_mills: return "yang_mills";
    case Sector::higgs: return "higgs";
    case Sector::dirac: return "dirac";
    case Sector::conformal_higgs: return "conformal_higgs";
    case Sector::total: return "total";
  }
  return "?";
}

double EnergyMomentumTensor::trace_eta() const {
  double s = 0;
  for (int mu = 0; mu < m; ++mu) s += eta_factor(mu) * comps(mu, mu);
  return s;
}

double EnergyMomentumTensor::contract(const RVec& x_frame) const {
  double s = 0;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) s += comps(mu, nu) * x_frame[mu] * x_frame[nu];
  return s;
}

double EnergyMomentumTensor::symmetry_residual() const {
  double r = 0;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) r = std::max(r, std::abs(comps(mu, nu) - comps(nu, mu)));
  return r;
}

EnergyMomentumTensor emt_yang_mills(const std::vector<std::vector<RVec>>& f_frame, int m) {
  EnergyMomentumTensor t;
  t.m = m;
  t.sector = Sector::yang_mills;
  t.comps = RMat(m, m);
  double f2 = f_norm2_frame(f_frame, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      double v = 0;
      for (int a = 0; a < m; ++a) v += eta_factor(a) * dot(f_frame[mu][a], f_frame[nu][a]);
      if (mu == nu) v -= 0.5 * f2 * eta_factor(mu);
      t.comps(mu, nu) = v;
      t.comps(nu, mu) = v;
    }
  return t;
}

EnergyMomentumTensor emt_higgs_value(const gauge::GaugeJet& jet, double potential_value) {
  const int m = jet.m;
  EnergyMomentumTensor t;
  t.m = m;
  t.sector = Sector::higgs;
  t.comps = RMat(m, m);
  double kinetic = dphi_norm2_frame(jet.dphi, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      double v = hdot(jet.dphi[mu], jet.dphi[nu]).real();
      if (mu == nu) v -= 0.5 * (kinetic + potential_value) * eta_factor(mu);
      t.comps(mu, nu) = v;
      t.comps(nu, mu) = v;
    }
  return t;
}

EnergyMomentumTensor emt_higgs(const gauge::GaugeJet& jet, const gauge::Potential& pot) {
  if (pot.kind == gauge::Potential::Kind::conformal)
    fail(ErrorKind::out_of_scope,
         "the conformal potential belongs to the conformal-Higgs sector, not emt_higgs");
  auto pv = gauge::potential_eval(pot, jet.phi, jet.m);
  return emt_higgs_value(jet, pv.U);
}

EnergyMomentumTensor emt_dirac(const clifford::SpinorJet& psi,
                               const clifford::CliffordModel& model, int m) {
  EnergyMomentumTensor t;
  t.m = m;
  t.sector = Sector::dirac;
  t.comps = RMat(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      CVec a = clifford::apply_spinor_matrix(model.gamma[mu], psi.nabla[nu], psi.dim_v);
      CVec b = clifford::apply_spinor_matrix(model.gamma[nu], psi.nabla[mu], psi.dim_v);
      for (size_t i = 0; i < a.size(); ++i) a[i] = kI * (a[i] + b[i]);
      double v = 0.25 * clifford::pair(model, psi.value, a, psi.dim_v).real();
      t.comps(mu, nu) = v;
      t.comps(nu, mu) = v;
    }
  return t;
}

EnergyMomentumTensor emt_conformal_higgs(const gauge::GaugeJet& jet,
                                         const geometry::CurvatureData& curv, double lambda,
                                         double yukawa_pairing) {
  const int m = jet.m;
  if (!jet.has_depth2)
    fail(ErrorKind::insufficient_jet, "conformal-Higgs tensor needs a depth-2 jet");
  EnergyMomentumTensor t;
  t.m = m;
  t.sector = Sector::conformal_higgs;
  t.comps = RMat(m, m);
  double phi2 = 0;
  for (const auto& c : jet.phi) phi2 += std::norm(c);
  double phi4 = phi2 * phi2;
  double kinetic = dphi_norm2_frame(jet.dphi, m);
  double conf_coeff = static_cast<double>(m - 2) / (4.0 * (m - 1));
  double scalar_part = -kinetic - conf_coeff * curv.scal * phi2 +
                       0.5 * (m - 3) * lambda * phi4 + 0.5 * (m - 2) * yukawa_pairing;
  double pre = 1.0 / (2.0 * (m - 1));
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      CVec dd(jet.phi.size());
      for (size_t i = 0; i < dd.size(); ++i)
        dd[i] = 0.5 * (jet.ddphi[mu][nu][i] + jet.ddphi[nu][mu][i]);
      double v = (2.0 - m) * hdot(jet.phi, dd).real();
      v += m * hdot(jet.dphi[mu], jet.dphi[nu]).real();
      v += 0.5 * (m - 2) * phi2 * curv.ricci(mu, nu);
      if (mu == nu) v += scalar_part * eta_factor(mu);
      t.comps(mu, nu) = pre * v;
      t.comps(nu, mu) = t.comps(mu, nu);
    }
  return t;
}

SectorSet evaluate_sectors(const gauge::FieldConfig& cfg, const RVec& x,
                           const numerics::Stencil& st) {
  SectorSet s;
  s.m = cfg.m;
  const bool conformal = cfg.potential.kind == gauge::Potential::Kind::conformal;
  const int depth = (cfg.has_higgs() && conformal) ? 2 : 1;
  s.jet = gauge::covariant_jet(cfg, x, st, depth);
  s.f_norm2 = f_norm2_frame(s.jet.F, cfg.m);

  s.total.m = cfg.m;
  s.total.sector = Sector::total;
  s.total.comps = RMat(cfg.m, cfg.m);

  if (cfg.has_connection()) {
    s.has_ym = true;
    s.ym = emt_yang_mills(s.jet.F, cfg.m);
    s.total.comps = s.total.comps + s.ym.comps;
  }
  if (cfg.has_spinor()) {
    s.has_dirac = true;
    s.dirac = emt_dirac(s.jet.psi, cfg.cliff, cfg.m);
    s.total.comps = s.total.comps + s.dirac.comps;
    CVec phi0 = cfg.has_higgs() ? s.jet.phi : CVec(cfg.rep.dim_w, cplx(0));
    s.yukawa_pairing = gauge::yukawa_pair(cfg.cliff, cfg.yukawa, phi0, s.jet.psi.value);
  }
  if (cfg.has_higgs()) {
    s.dphi_norm2 = dphi_norm2_frame(s.jet.dphi, cfg.m);
    for (const auto& c : s.jet.phi) s.phi_norm2 += std::norm(c);
    if (conformal) {
      s.has_chiggs = true;
      s.curvature = geometry::curvature_package(cfg.metric, x, st);
      s.chiggs = emt_conformal_higgs(s.jet, *s.curvature, cfg.potential.lambda, s.yukawa_pairing);
      auto pv = gauge::potential_eval(cfg.potential, s.jet.phi, cfg.m, s.curvature->scal);
      s.potential_value = pv.U;
      s.total.comps = s.total.comps + s.chiggs.comps;
    } else {
      s.has_higgs = true;
      auto pv = gauge::potential_eval(cfg.potential, s.jet.phi, cfg.m);
      s.potential_value = pv.U;
      s.higgs = emt_higgs_value(s.jet, pv.U);
      s.total.comps = s.total.comps + s.higgs.comps;
    }
  }
  return s;
}

double TraceResiduals::max_algebraic() const {
  double r = 0;
  if (yang_mills) r = std::max(r, *yang_mills);
  if (higgs) r = std::max(r, *higgs);
  if (dirac_algebraic) r = std::max(r, *dirac_algebraic);
  return r;
}

TraceResiduals trace_check(const SectorSet& s, const gauge::FieldConfig& cfg) {
  TraceResiduals out;
  const int m = s.m;
  if (s.has_ym)
    out.yang_mills = std::abs(s.ym.trace_eta() + 0.5 * (m - 4) * s.f_norm2);
  if (s.has_higgs)
    out.higgs = std::abs(s.higgs.trace_eta() + 0.5 * (m - 2) * s.dphi_norm2 +
                         0.5 * m * s.potential_value);
  if (s.has_dirac) {
    auto dirac = clifford::dirac_apply(cfg.cliff, s.jet.psi);
    CVec i_dirac = dirac.value;
    for (auto& c : i_dirac) c *= kI;
    double half_pair =
        0.5 * clifford::pair(cfg.cliff, s.jet.psi.value, i_dirac, s.jet.psi.dim_v).real();
    out.dirac_algebraic = std::abs(s.dirac.trace_eta() - half_pair);
    out.dirac_on_shell = std::abs(s.dirac.trace_eta() + 0.5 * s.yukawa_pairing);
  }
  if (s.has_chiggs) {
    double expected = 0.25 * (m - 4) * cfg.potential.lambda * s.phi_norm2 * s.phi_norm2 +
                      0.25 * (m - 2) * s.yukawa_pairing;
    out.chiggs_on_shell = std::abs(s.chiggs.trace_eta() - expected);
    double expected_total =
        (m - 4) * (-0.5 * s.f_norm2 + 0.25 * s.yukawa_pairing +
                   0.25 * cfg.potential.lambda * s.phi_norm2 * s.phi_norm2);
    out.total_conformal_on_shell = std::abs(s.total.trace_eta() - expected_total);
  }
  return out;
}

namespace {

RMat frame_to_coord(const RMat& t_frame, const geometry::Frame& fr) {
  const int m = fr.m;
  RMat t(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double v = 0;
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu)
          v += t_frame(mu, nu) * fr.covectors(mu, a) * fr.covectors(nu, b);
      t(a, b) = v;
    }
  return t;
}

}  // namespace

RMat sector_tensor_coord(const gauge::FieldConfig& cfg, const RVec& x,
                         const numerics::Stencil& jet_st, Sector sector) {
  SectorSet s = evaluate_sectors(cfg, x, jet_st);
  const RMat* t = nullptr;
  switch (sector) {
    case Sector::yang_mills: t = &s.ym.comps; break;
    case Sector::higgs: t = &s.higgs.comps; break;
    case Sector::dirac: t = &s.dirac.comps; break;
    case Sector::conformal_higgs: t = &s.chiggs.comps; break;
    case Sector::total: t = &s.total.comps; break;
  }
  if (t->rows == 0) fail(ErrorKind::parameter, "requested sector is not active in this scene");
  return frame_to_coord(*t, s.jet.frame);
}

RVec nabla_star_tensor(const gauge::FieldConfig& cfg, const RVec& x,
                       const numerics::Stencil& jet_st, const numerics::Stencil& div_st,
                       Sector sector) {
  auto field = [&](const RVec& p) { return sector_tensor_coord(cfg, p, jet_st, sector); };
  RVec div = geometry::covariant_divergence(field, cfg.metric, x, div_st);
  geometry::Frame fr = cfg.frame_at(x);
  RVec frame_form = fr.to_frame_covector(div);
  for (auto& v : frame_form) v = -v;
  return frame_form;
}

DivergenceResiduals divergence_identity_check(const gauge::FieldConfig& cfg, const RVec& x,
                                              const numerics::Stencil& jet_st,
                                              const numerics::Stencil& div_st,
                                              bool scene_is_solution) {
  DivergenceResiduals out;
  const int m = cfg.m;
  SectorSet s = evaluate_sectors(cfg, x, jet_st);

  if (cfg.has_connection()) {
    RVec lhs = nabla_star_tensor(cfg, x, jet_st, div_st, Sector::yang_mills);
    auto dstar = gauge::d_omega_star_f(cfg, x, jet_st);
    double res = 0;
    for (int nu = 0; nu < m; ++nu) {
      double rhs = 0;
      for (int lm = 0; lm < m; ++lm) rhs -= eta_factor(lm) * dot(dstar[lm], s.jet.F[lm][nu]);
      res += (lhs[nu] - rhs) * (lhs[nu] - rhs);
    }
    out.ym_off_shell = std::sqrt(res);
  }

  if (cfg.has_higgs() && cfg.potential.kind != gauge::Potential::Kind::conformal) {
    RVec lhs = nabla_star_tensor(cfg, x, jet_st, div_st, Sector::higgs);
    CVec box = gauge::box_phi(cfg, x, jet_st);
    auto pv = gauge::potential_eval(cfg.potential, s.jet.phi, m);
    CVec el(box.size());
    for (size_t i = 0; i < box.size(); ++i) el[i] = box[i] - 0.5 * pv.grad[i];
    double res = 0;
    for (int nu = 0; nu < m; ++nu) {
      double rhs = -hdot(el, s.jet.dphi[nu]).real();
      for (int mu = 0; mu < m; ++mu) {
        CVec rho_f_phi = cfg.rep.rho_of(s.jet.F[mu][nu]) * s.jet.phi;
        rhs -= eta_factor(mu) * hdot(s.jet.dphi[mu], rho_f_phi).real();
      }
      res += (lhs[nu] - rhs) * (lhs[nu] - rhs);
    }
    out.higgs_off_shell = std::sqrt(res);
  }

  if (scene_is_solution) {
    RVec lhs = nabla_star_tensor(cfg, x, jet_st, div_st, Sector::total);
    out.total_on_shell = norm2(lhs);
  }
  return out;
}

VariationalResult variational_oracle(const gauge::FieldConfig& cfg,
                                     const std::function<RMat(const RVec&)>& h_field,
                                     const geometry::Region& region, double t_step, int threads) {
  if (cfg.has_spinor())
    fail(ErrorKind::out_of_scope, "variational oracle covers the Yang-Mills and Higgs sectors only");
  if (cfg.potential.kind == gauge::Potential::Kind::conformal)
    fail(ErrorKind::out_of_scope, "variational oracle does not cover the conformal potential");
  if (t_step <= 0) fail(ErrorKind::parameter, "variation step must be positive");

  const int m = cfg.m;
  const int n = region.total_points();
  const double w = region.cell_volume();
  numerics::Stencil st(4, 1e-3);

  RVec plus(n, 0.0), minus(n, 0.0), pair_term(n, 0.0);
  numerics::parallel_for(
      n,
      [&](int idx) {
        RVec x = region.point(idx);
        RMat g0 = cfg.metric.metric(x);
        RMat h = h_field(x);
        auto f_coord = gauge::field_strength_coord(cfg, x, st);
        std::vector<CVec> dphi_coord;
        CVec phi0;
        double U = 0;
        if (cfg.has_higgs()) {
          dphi_coord = gauge::higgs_cov_deriv_coord(cfg, x, st);
          phi0 = cfg.higgs(x);
          U = gauge::potential_eval(cfg.potential, phi0, m).U;
        }

        auto lagrangian_density = [&](const RMat& g) {
          RMat ginv = inverse(g);
          double f2 = 0;
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                  double wgt = 0.5 * ginv(a, c) * ginv(b, d);
                  if (wgt == 0) continue;
                  f2 += wgt * dot(f_coord[a][b], f_coord[c][d]);
                }
          double kin = 0;
          if (cfg.has_higgs())
            for (int a = 0; a < m; ++a)
              for (int b = 0; b < m; ++b)
                kin += ginv(a, b) * hdot(dphi_coord[a], dphi_coord[b]).real();
          double vol = std::sqrt(-det(g));
          return -(f2 + kin + U) * vol;
        };

        plus[idx] = lagrangian_density(g0 + h * t_step);
        minus[idx] = lagrangian_density(g0 - h * t_step);

        // <h, T> dvol with indices raised by g0
        RMat ginv = inverse(g0);
        RMat h_up(m, m);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            double v = 0;
            for (int c = 0; c < m; ++c)
              for (int d = 0; d < m; ++d) v += ginv(a, c) * ginv(b, d) * h(c, d);
            h_up(a, b) = v;
          }
        double f2 = 0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
              for (int d = 0; d < m; ++d)
                f2 += 0.5 * ginv(a, c) * ginv(b, d) * dot(f_coord[a][b], f_coord[c][d]);
        double kin = 0;
        if (cfg.has_higgs())
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              kin += ginv(a, b) * hdot(dphi_coord[a], dphi_coord[b]).real();

        double tr_h_t = 0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            double t_ab = 0;
            for (int c = 0; c < m; ++c)
              for (int d = 0; d < m; ++d) t_ab += ginv(c, d) * dot(f_coord[a][c], f_coord[b][d]);
            if (cfg.has_higgs()) t_ab += hdot(dphi_coord[a], dphi_coord[b]).real();
            t_ab -= 0.5 * (f2 + kin + U) * g0(a, b);
            tr_h_t += h_up(a, b) * t_ab;
          }
        pair_term[idx] = tr_h_t * std::sqrt(-det(g0));
      },
      threads);

  VariationalResult out;
  double sp = 0, sm = 0, sr = 0;
  for (int i = 0; i < n; ++i) {
    sp += plus[i];
    sm += minus[i];
    sr += pair_term[i];
  }
  out.lhs = (sp - sm) / (2 * t_step) * w;
  out.rhs = sr * w;
  return out;
}

}  // namespace emtlab::emt
