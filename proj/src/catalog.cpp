#include <cstdio>

#include "emtlab/scene.hpp"

namespace emtlab::scene {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string("(") + buf + ")";
}

json base_skeleton(int m) {
  json doc;
  doc["dimension"] = m;
  doc["metric"] = {{"family", "minkowski"}};
  doc["algebra"] = "u1";
  doc["representations"] = json::object();
  doc["fields"] = json::object();
  doc["potential"] = {{"kind", "none"}};
  doc["yukawa"] = {{"kind", "zero"}};
  doc["region"] = {{"center", {0.0, 0.0, 0.0, 0.0}},
                   {"half_widths", {0.4, 0.4, 0.4, 0.4}},
                   {"samples_per_axis", 2}};
  doc["checks"] = {"traces", "divergence", "el_residuals", "energy_conditions"};
  doc["tolerances"] = json::object();
  return doc;
}

json minkowski_constant_em() {
  // two commuting abelian field strengths: an electric field along x1 and a
  // magnetic field along x2, in orthogonal color directions, so every causal
  // ray sees strictly positive energy and the field equations are exact
  json doc = base_skeleton(4);
  doc["algebra"] = json::array({"u1", "u1"});
  doc["fields"]["params"] = {{"E1", 1.0}, {"B1", 0.5}};
  doc["fields"]["A"] =
      json::array({json::array({"0", "0"}), json::array({"E1*t", "B1*x3"}),
                   json::array({"0", "0"}), json::array({"0", "0"})});
  doc["checks"] = {"traces", "divergence", "el_residuals", "energy_conditions", "variational"};
  doc["solution_flag"] = true;
  return doc;
}

json higgs_null_planewave() {
  json doc = base_skeleton(4);
  doc["representations"]["rho"] = {{"preset", "trivial"}, {"dim", 1}};
  doc["fields"]["params"] = {{"w", 1.0}, {"k1", 1.0}};
  json pair = json::array({"w*cos(k1*(t + x1))", "w*sin(k1*(t + x1))"});
  doc["fields"]["higgs"] = json::array({pair});
  doc["solution_flag"] = true;
  return doc;
}

json higgs_vacuum_mexhat() {
  json doc = base_skeleton(4);
  doc["algebra"] = "su2";
  doc["representations"]["rho"] = {{"preset", "su2-fundamental"}};
  doc["fields"]["params"] = {{"v", 1.0}};
  doc["fields"]["higgs"] =
      json::array({json::array({"v", "0"}), json::array({"0", "0"})});
  doc["potential"] = {{"kind", "mexican_hat"}, {"lambda", 2.0}, {"mu", 2.0}};
  doc["solution_flag"] = true;
  return doc;
}

json dirac_planewave_m4() {
  json doc = base_skeleton(4);
  doc["representations"]["rho"] = {{"preset", "trivial"}, {"dim", 0}};
  doc["representations"]["chi"] = {{"plus", {{"preset", "trivial"}, {"dim", 1}}},
                                   {"minus", {{"preset", "trivial"}, {"dim", 0}}}};
  doc["fields"]["params"] = {{"k1", 1.0}};

  // chiral kernel state: u in ker(-gamma_0 + gamma_1) with P_+ u = u
  auto model = clifford::build_clifford_model(4);
  CMat stacked(2 * model.dim, model.dim);
  CMat slash = model.gamma[1] - model.gamma[0];
  for (int r = 0; r < model.dim; ++r)
    for (int c = 0; c < model.dim; ++c) {
      stacked(r, c) = slash(r, c);
      stacked(model.dim + r, c) = model.proj_minus(r, c);
    }
  auto kernel = nullspace(stacked);
  if (kernel.size() != 1)
    fail(ErrorKind::contract_violation, "dirac plane-wave catalog scene: kernel is not 1d");
  CVec u = kernel[0];
  // deterministic phase: largest component real positive
  int imax = 0;
  for (size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[imax])) imax = static_cast<int>(i);
  cplx phase = std::conj(u[imax]) / std::abs(u[imax]);
  for (auto& c : u) c *= phase;

  json spinor = json::array();
  for (const auto& c : u) {
    std::string th = "k1*(t + x1)";
    std::string re = num(c.real()) + "*cos(" + th + ") - " + num(c.imag()) + "*sin(" + th + ")";
    std::string im = num(c.real()) + "*sin(" + th + ") + " + num(c.imag()) + "*cos(" + th + ")";
    spinor.push_back(json::array({re, im}));
  }
  doc["fields"]["spinor"] = spinor;
  doc["checks"] = {"traces", "divergence", "el_residuals", "energy_conditions", "weitzenboeck"};
  doc["solution_flag"] = true;
  return doc;
}

json desitter_conformal_higgs() {
  json doc = base_skeleton(4);
  doc["metric"] = {{"family", "desitter"}, {"params", {{"H", 0.5}}}};
  doc["representations"]["rho"] = {{"preset", "trivial"}, {"dim", 1}};
  doc["fields"]["params"] = {{"w", 1.0}};
  doc["fields"]["higgs"] = json::array({json::array({"w*exp(-H*t)", "0"})});
  doc["potential"] = {{"kind", "conformal"}, {"lambda", 0.0}};
  doc["tolerances"] = {{"solution", 2e-6}};
  doc["solution_flag"] = true;
  return doc;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"minkowski-constant-em", "higgs-null-planewave", "higgs-vacuum-mexhat",
          "dirac-planewave-m4", "desitter-conformal-higgs"};
}

json builtin_document(const std::string& name) {
  if (name == "minkowski-constant-em") return minkowski_constant_em();
  if (name == "higgs-null-planewave") return higgs_null_planewave();
  if (name == "higgs-vacuum-mexhat") return higgs_vacuum_mexhat();
  if (name == "dirac-planewave-m4") return dirac_planewave_m4();
  if (name == "desitter-conformal-higgs") return desitter_conformal_higgs();
  fail(ErrorKind::parameter, "unknown builtin scene '" + name + "'");
}

}  // namespace emtlab::scene
