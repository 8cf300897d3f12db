#pragma once

// Shared helpers for the test suites: random model data, random analytic
// scenes built from expression strings, and small comparison utilities.

#include <functional>
#include <string>
#include <vector>

#include "emtlab/emt.hpp"
#include "emtlab/energycond.hpp"
#include "emtlab/numerics.hpp"
#include "emtlab/scene.hpp"

namespace emtlab::testsupport {

using numerics::Rng;

inline RMat random_spd(Rng& rng, int n, double spread = 1.0) {
  RMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = spread * rng.uniform(-0.5, 0.5);
  RMat spd = b * b.transpose();
  for (int i = 0; i < n; ++i) spd(i, i) += 0.3;
  return spd;
}

inline RMat random_symmetric(Rng& rng, int n, double scale = 1.0) {
  RMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      a(i, j) = scale * rng.uniform(-1, 1);
      a(j, i) = a(i, j);
    }
  return a;
}

inline RMat random_rotation(Rng& rng, int n) {
  // QR of a Gaussian matrix via Gram-Schmidt
  std::vector<RVec> cols;
  for (int c = 0; c < n; ++c) {
    RVec v = rng.normal_vec(n);
    for (const auto& u : cols) {
      double p = dot(u, v);
      for (int i = 0; i < n; ++i) v[i] -= p * u[i];
    }
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    cols.push_back(v);
  }
  RMat q(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) q(r, c) = cols[c][r];
  return q;
}

inline CVec random_cvec(Rng& rng, int n, double scale = 1.0) {
  CVec v(n);
  for (auto& c : v) c = cplx(scale * rng.uniform(-1, 1), scale * rng.uniform(-1, 1));
  return v;
}

// random antisymmetric frame field-strength data F[mu][nu] in g-coordinates
inline std::vector<std::vector<RVec>> random_field_strength(Rng& rng, int m, int dim_g,
                                                            double scale = 1.0) {
  std::vector<std::vector<RVec>> f(m, std::vector<RVec>(m, RVec(dim_g, 0.0)));
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu + 1; nu < m; ++nu) {
      for (int c = 0; c < dim_g; ++c) f[mu][nu][c] = scale * rng.uniform(-1, 1);
      f[nu][mu] = vscale(f[mu][nu], -1.0);
    }
  return f;
}

inline gauge::GaugeJet random_higgs_jet(Rng& rng, int m, int dim_w, double scale = 1.0) {
  gauge::GaugeJet jet;
  jet.m = m;
  jet.has_phi = true;
  jet.phi = random_cvec(rng, dim_w, scale);
  jet.dphi.resize(m);
  for (int mu = 0; mu < m; ++mu) jet.dphi[mu] = random_cvec(rng, dim_w, scale);
  return jet;
}

inline clifford::SpinorJet random_spinor_jet(Rng& rng, const clifford::CliffordModel& model,
                                             int dim_v, double scale = 1.0) {
  clifford::SpinorJet jet;
  jet.dim_v = dim_v;
  jet.value = random_cvec(rng, model.dim * dim_v, scale);
  jet.nabla.resize(model.m);
  for (int mu = 0; mu < model.m; ++mu) jet.nabla[mu] = random_cvec(rng, model.dim * dim_v, scale);
  return jet;
}

// A smooth random scalar expression in the scene language: a small sum of
// polynomial and trigonometric terms in the coordinates.
inline std::string random_expression(Rng& rng, int m, double scale = 0.5) {
  auto coord = [&](int k) {
    return k == 0 ? std::string("t") : "x" + std::to_string(k);
  };
  auto coeff = [&]() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", scale * rng.uniform(-1, 1));
    return std::string("(") + buf + ")";
  };
  std::string e = coeff();
  int terms = 2 + static_cast<int>(rng.uniform() * 2);
  for (int i = 0; i < terms; ++i) {
    int a = static_cast<int>(rng.uniform() * m) % m;
    int b = static_cast<int>(rng.uniform() * m) % m;
    int shape = static_cast<int>(rng.uniform() * 3) % 3;
    if (shape == 0)
      e += " + " + coeff() + "*" + coord(a) + "*" + coord(b);
    else if (shape == 1)
      e += " + " + coeff() + "*sin(" + coeff() + " + " + coord(a) + ")";
    else
      e += " + " + coeff() + "*" + coord(a) + "*cos(" + coord(b) + ")";
  }
  return e;
}

// A random off-shell u(1) + charged-Higgs scene on a flat or curved
// background, used by the divergence-identity and trace property suites.
inline scene::Scene random_scene(Rng& rng, bool curved, int samples_per_axis = 1) {
  scene::json doc;
  doc["dimension"] = 4;
  if (curved) {
    doc["metric"] = {{"family", "flrw"}, {"a", "1 + 0.1*sin(0.4*t)"}};
  } else {
    doc["metric"] = {{"family", "minkowski"}};
  }
  doc["algebra"] = "u1";
  doc["representations"] = {{"rho", {{"preset", "u1-charge"}, {"dim", 1}, {"charge", 1.0}}}};
  scene::json a_rows = scene::json::array();
  for (int a = 0; a < 4; ++a) {
    scene::json row = scene::json::array();
    row.push_back(random_expression(rng, 4));
    a_rows.push_back(row);
  }
  scene::json higgs = scene::json::array();
  {
    scene::json pair = scene::json::array();
    pair.push_back(random_expression(rng, 4));
    pair.push_back(random_expression(rng, 4));
    higgs.push_back(pair);
  }
  doc["fields"] = {{"A", a_rows}, {"higgs", higgs}};
  doc["potential"] = {{"kind", "mexican_hat"}, {"lambda", 0.7}, {"mu", 0.4}};
  doc["yukawa"] = {{"kind", "zero"}};
  doc["region"] = {{"center", {0.05, -0.1, 0.2, 0.1}},
                   {"half_widths", {0.3, 0.3, 0.3, 0.3}},
                   {"samples_per_axis", samples_per_axis}};
  doc["checks"] = {"divergence", "traces"};
  doc["tolerances"] = scene::json::object();
  return scene::load_scene(doc);
}

}  // namespace emtlab::testsupport
