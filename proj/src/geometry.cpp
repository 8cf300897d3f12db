#include "emtlab/geometry.hpp"

#include <cmath>

namespace emtlab::geometry {

void AdmData::validate() const {
  if (m < 2) fail(ErrorKind::invalid_metric, "spacetime dimension must be >= 2");
  if (!(N > 0)) fail(ErrorKind::invalid_metric, "lapse must be positive");
  if (static_cast<int>(beta.size()) != m - 1) fail(ErrorKind::invalid_metric, "shift must have length m-1");
  if (gbar.rows != m - 1 || gbar.cols != m - 1)
    fail(ErrorKind::invalid_metric, "spatial metric must be (m-1)x(m-1)");
  if (!is_spd(gbar)) fail(ErrorKind::invalid_metric, "spatial metric must be symmetric positive definite");
}

RMat AdmData::spacetime_metric() const {
  RMat g(m, m);
  RVec beta_flat = gbar * beta;
  g(0, 0) = -N * N;
  for (int i = 0; i < m - 1; ++i) {
    g(0, i + 1) = beta_flat[i];
    g(i + 1, 0) = beta_flat[i];
    for (int j = 0; j < m - 1; ++j) g(i + 1, j + 1) = gbar(i, j);
  }
  return g;
}

static Frame frame_from_parts(const AdmData& adm, const RMat& spatial_basis) {
  adm.validate();
  const int m = adm.m;
  RVec beta_flat = adm.gbar * adm.beta;
  double beta2 = dot(adm.beta, beta_flat);
  double alpha = std::sqrt(adm.N * adm.N + beta2);

  Frame fr;
  fr.m = m;
  fr.vectors = RMat(m, m);
  // e0 = n = (dt - beta)/alpha, future-pointing
  fr.vectors(0, 0) = 1.0 / alpha;
  for (int i = 0; i < m - 1; ++i) fr.vectors(0, i + 1) = -adm.beta[i] / alpha;

  // Gram-Schmidt of the requested spatial basis under gbar
  std::vector<RVec> es;
  for (int k = 0; k < m - 1; ++k) {
    RVec v(m - 1);
    for (int j = 0; j < m - 1; ++j) v[j] = spatial_basis(k, j);
    for (const auto& e : es) {
      double proj = dot(v, adm.gbar * e);
      for (int j = 0; j < m - 1; ++j) v[j] -= proj * e[j];
    }
    double nv = std::sqrt(dot(v, adm.gbar * v));
    if (!(nv > 1e-13)) fail(ErrorKind::invalid_metric, "degenerate spatial basis in frame construction");
    for (auto& x : v) x /= nv;
    es.push_back(v);
    for (int j = 0; j < m - 1; ++j) fr.vectors(k + 1, j + 1) = v[j];
  }

  fr.covectors = inverse(fr.vectors).transpose();
  return fr;
}

Frame build_frame(const AdmData& adm) {
  return frame_from_parts(adm, RMat::identity(adm.m - 1));
}

Frame build_frame_with_basis(const AdmData& adm, const RMat& spatial_basis) {
  return frame_from_parts(adm, spatial_basis);
}

RVec Frame::to_frame_covector(const RVec& coord_oneform) const {
  RVec out(m, 0.0);
  for (int mu = 0; mu < m; ++mu)
    for (int a = 0; a < m; ++a) out[mu] += vectors(mu, a) * coord_oneform[a];
  return out;
}

RVec Frame::to_coord_vector(const RVec& frame_components) const {
  RVec out(m, 0.0);
  for (int mu = 0; mu < m; ++mu)
    for (int a = 0; a < m; ++a) out[a] += frame_components[mu] * vectors(mu, a);
  return out;
}

int Region::total_points() const {
  int n = 1;
  for (int s : samples) {
    if (s < 1) fail(ErrorKind::parameter, "region needs at least one sample per axis");
    n *= s;
  }
  return n;
}

RVec Region::point(int index) const {
  const int d = static_cast<int>(center.size());
  RVec x(d);
  for (int a = d - 1; a >= 0; --a) {
    int s = samples[a];
    int i = index % s;
    index /= s;
    x[a] = (s == 1) ? center[a]
                    : center[a] - half_widths[a] + 2.0 * half_widths[a] * i / (s - 1);
  }
  return x;
}

double Region::cell_volume() const {
  double v = 1;
  for (size_t a = 0; a < center.size(); ++a) {
    int s = samples[a];
    v *= (s == 1) ? 2.0 * half_widths[a] : 2.0 * half_widths[a] / (s - 1);
  }
  return v;
}

CausalDirection classify_direction(const RVec& xi, double tol) {
  CausalDirection d;
  d.xi = xi;
  d.norm = norm2(xi);
  if (d.norm > 1 + 1e-12 && d.norm > 1 + tol)
    d.kind = CausalClass::spacelike_invalid;
  else if (std::abs(d.norm - 1) <= tol)
    d.kind = CausalClass::null;
  else if (d.norm < 1)
    d.kind = CausalClass::timelike;
  else
    d.kind = CausalClass::null;  // within the 1e-12 slack above the sphere
  return d;
}

MetricFamily MetricFamily::minkowski(int m) {
  MetricFamily f;
  f.m = m;
  f.name = "minkowski";
  f.adm = [m](const RVec&) {
    AdmData a;
    a.m = m;
    a.N = 1;
    a.beta = RVec(m - 1, 0.0);
    a.gbar = RMat::identity(m - 1);
    return a;
  };
  f.metric = [m](const RVec&) { return eta_matrix(m); };
  return f;
}

MetricFamily MetricFamily::flrw(int m, std::function<double(double)> scale) {
  MetricFamily f;
  f.m = m;
  f.name = "flrw";
  auto adm = [m, scale](const RVec& x) {
    AdmData a;
    a.m = m;
    a.N = 1;
    a.beta = RVec(m - 1, 0.0);
    double s = scale(x[0]);
    a.gbar = RMat::identity(m - 1) * (s * s);
    return a;
  };
  f.adm = adm;
  f.metric = [adm](const RVec& x) { return adm(x).spacetime_metric(); };
  return f;
}

MetricFamily MetricFamily::de_sitter(int m, double H) {
  MetricFamily f = flrw(m, [H](double t) { return std::exp(H * t); });
  f.name = "desitter";
  return f;
}

MetricFamily MetricFamily::from_adm(int m, std::function<AdmData(const RVec&)> adm, std::string name) {
  MetricFamily f;
  f.m = m;
  f.name = std::move(name);
  f.adm = adm;
  f.metric = [adm](const RVec& x) { return adm(x).spacetime_metric(); };
  return f;
}

std::vector<RMat> christoffels(const MetricFamily& family, const RVec& x,
                               const numerics::Stencil& st) {
  const int m = family.m;
  RMat g = family.metric(x);
  RMat ginv = inverse(g);
  numerics::Field gf = [&](const RVec& p) {
    RMat gm = family.metric(p);
    return gm.a;
  };
  RMat dg = numerics::fd_grad(gf, x, st);  // (component index m*m, axis)
  auto dgv = [&](int a, int b, int c) { return dg(a * m + b, c); };  // d_c g_{ab}
  std::vector<RMat> gamma(m, RMat(m, m));
  for (int l = 0; l < m; ++l)
    for (int mu = 0; mu < m; ++mu)
      for (int nu = mu; nu < m; ++nu) {
        double s = 0;
        for (int sg = 0; sg < m; ++sg)
          s += ginv(l, sg) * (dgv(sg, nu, mu) + dgv(sg, mu, nu) - dgv(mu, nu, sg));
        gamma[l](mu, nu) = 0.5 * s;
        gamma[l](nu, mu) = gamma[l](mu, nu);
      }
  return gamma;
}

CurvatureData curvature_package(const MetricFamily& family, const RVec& x,
                                const numerics::Stencil& st) {
  const int m = family.m;
  RMat g = family.metric(x);
  {
    // Lorentzian signature: exactly one negative eigenvalue
    EigSym eg = eigh(g);
    int neg = 0;
    for (double ev : eg.values) {
      if (std::abs(ev) < 1e-12) fail(ErrorKind::invalid_metric, "degenerate metric at evaluation point");
      if (ev < 0) ++neg;
    }
    if (neg != 1) fail(ErrorKind::invalid_metric, "metric does not have Lorentzian signature");
  }
  RMat ginv = inverse(g);

  CurvatureData cd;
  cd.m = m;
  cd.christoffel = christoffels(family, x, st);

  // dGamma^l_{mn} / dx^k by differentiating the Christoffel field
  numerics::Field gammaf = [&](const RVec& p) {
    auto gm = christoffels(family, p, st);
    RVec flat;
    flat.reserve(static_cast<size_t>(m) * m * m);
    for (int l = 0; l < m; ++l)
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) flat.push_back(gm[l](mu, nu));
    return flat;
  };
  RMat dgamma = numerics::fd_grad(gammaf, x, st);
  auto dG = [&](int l, int mu, int nu, int k) { return dgamma((l * m + mu) * m + nu, k); };

  cd.riemann.assign(static_cast<size_t>(m) * m * m * m, 0.0);
  auto set_riem = [&](int l, int mu, int nu, int k, double v) {
    cd.riemann[((static_cast<size_t>(l) * m + mu) * m + nu) * m + k] = v;
  };
  // R^r_{s mn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s)
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) {
          double v = dG(r, nu, s, mu) - dG(r, mu, s, nu);
          for (int l = 0; l < m; ++l)
            v += cd.christoffel[r](mu, l) * cd.christoffel[l](nu, s) -
                 cd.christoffel[r](nu, l) * cd.christoffel[l](mu, s);
          set_riem(r, s, mu, nu, v);
        }

  cd.ricci_coord = RMat(m, m);
  for (int s = 0; s < m; ++s)
    for (int nu = 0; nu < m; ++nu) {
      double v = 0;
      for (int l = 0; l < m; ++l) v += cd.riem(l, s, l, nu);
      cd.ricci_coord(s, nu) = v;
    }
  cd.scal = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) cd.scal += ginv(a, b) * cd.ricci_coord(a, b);

  AdmData adm = family.adm(x);
  Frame fr = build_frame(adm);
  cd.ricci = RMat(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      double v = 0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) v += fr.vectors(mu, a) * fr.vectors(nu, b) * cd.ricci_coord(a, b);
      cd.ricci(mu, nu) = v;
    }
  RMat eta = eta_matrix(m);
  cd.einstein = cd.ricci - eta * (0.5 * cd.scal);

  // K_ij = g(nabla_{e_i} n, e_j) with n(x) from the ADM data; positive for
  // an expanding FLRW slice.
  numerics::Field normal_field = [&](const RVec& p) {
    AdmData ap = family.adm(p);
    RVec beta_flat = ap.gbar * ap.beta;
    double alpha = std::sqrt(ap.N * ap.N + dot(ap.beta, beta_flat));
    RVec n(m, 0.0);
    n[0] = 1.0 / alpha;
    for (int i = 0; i < m - 1; ++i) n[i + 1] = -ap.beta[i] / alpha;
    return n;
  };
  RMat dn = numerics::fd_grad(normal_field, x, st);  // (component b, axis a)
  RVec n0 = normal_field(x);
  RMat nabla_n(m, m);  // (a, b) = (nabla_a n)^b
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double v = dn(b, a);
      for (int c = 0; c < m; ++c) v += cd.christoffel[b](a, c) * n0[c];
      nabla_n(a, b) = v;
    }
  cd.second_fundamental = RMat(m - 1, m - 1);
  for (int i = 0; i < m - 1; ++i)
    for (int j = 0; j < m - 1; ++j) {
      double v = 0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            v += fr.vectors(i + 1, a) * nabla_n(a, b) * g(b, c) * fr.vectors(j + 1, c);
      cd.second_fundamental(i, j) = v;
    }
  cd.mean_curvature = cd.second_fundamental.trace() / (m - 1);
  return cd;
}

RMat covariant_derivative_oneform(const std::function<RVec(const RVec&)>& oneform_field,
                                  const MetricFamily& family, const RVec& x,
                                  const numerics::Stencil& st) {
  const int m = family.m;
  auto gamma = christoffels(family, x, st);
  RMat dw = numerics::fd_grad(oneform_field, x, st);  // (b, a) = d_a w_b
  RVec w0 = oneform_field(x);
  RMat nabla(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double v = dw(b, a);
      for (int c = 0; c < m; ++c) v -= gamma[c](a, b) * w0[c];
      nabla(a, b) = v;
    }
  return nabla;
}

RVec covariant_divergence(const std::function<RMat(const RVec&)>& tensor_field,
                          const MetricFamily& family, const RVec& x,
                          const numerics::Stencil& st) {
  const int m = family.m;
  auto gamma = christoffels(family, x, st);
  RMat ginv = inverse(family.metric(x));
  numerics::Field tf = [&](const RVec& p) {
    RMat T = tensor_field(p);
    return T.a;
  };
  RMat dT = numerics::fd_grad(tf, x, st);  // (index a*m+b, axis c)
  RMat T0 = tensor_field(x);
  RVec div(m, 0.0);
  for (int b = 0; b < m; ++b) {
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a) {
        double nab = dT(a * m + b, c);
        for (int d = 0; d < m; ++d)
          nab -= gamma[d](c, a) * T0(d, b) + gamma[d](c, b) * T0(a, d);
        div[b] += ginv(c, a) * nab;
      }
  }
  return div;
}

}  // namespace emtlab::geometry
