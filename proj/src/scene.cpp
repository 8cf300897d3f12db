#include "emtlab/scene.hpp"

#include <algorithm>
#include <fstream>

namespace emtlab::scene {

namespace {

const std::vector<std::string> kTopLevelKeys = {
    "dimension", "metric",  "algebra",    "representations", "fields",       "potential",
    "yukawa",    "region",  "checks",     "tolerances",      "builtin",      "solution_flag"};

const std::vector<std::string> kKnownChecks = {
    "traces", "divergence", "el_residuals", "weitzenboeck", "energy_conditions", "variational"};

void deep_merge(json& base, const json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()))
      deep_merge(base[it.key()], it.value());
    else
      base[it.key()] = it.value();
  }
}

class Loader {
 public:
  explicit Loader(const json& doc) : doc_(doc) {}

  Scene run() {
    if (!doc_.is_object()) bail("scene document must be a JSON object");
    expand_builtin();
    check_keys();
    load_dimension();
    load_params();
    load_metric();
    load_algebra();
    load_representations();
    load_potential();
    load_yukawa();
    load_fields();
    load_region();
    load_checks();
    load_tolerances();
    scene_.solution_flag = expanded_.value("solution_flag", false);
    finish();
    scene_.document = expanded_;
    scene_.hash = scene_hash(expanded_);
    return scene_;
  }

 private:
  json doc_, expanded_;
  Scene scene_;
  std::vector<std::string> errors_;
  std::vector<std::string> symbols_;  // t, x1..x_{m-1}, then params
  std::vector<double> param_values_;

  [[noreturn]] void bail(const std::string& msg) { fail(ErrorKind::validation, msg); }
  void complain(const std::string& msg) { errors_.push_back(msg); }

  void finish() {
    if (errors_.empty()) return;
    std::string msg = "scene validation failed:";
    for (const auto& e : errors_) msg += "\n  - " + e;
    fail(ErrorKind::validation, msg);
  }

  void expand_builtin() {
    expanded_ = doc_;
    if (!doc_.contains("builtin")) return;
    if (!doc_["builtin"].is_string()) bail("builtin must name a catalog scene");
    json base = builtin_document(doc_["builtin"].get<std::string>());
    json overlay = doc_;
    overlay.erase("builtin");
    deep_merge(base, overlay);
    base["builtin"] = doc_["builtin"];
    expanded_ = base;
  }

  void check_keys() {
    for (auto it = expanded_.begin(); it != expanded_.end(); ++it) {
      if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), it.key()) == kTopLevelKeys.end())
        complain("unknown top-level key '" + it.key() + "'");
    }
    for (const char* required : {"dimension", "metric", "algebra", "representations", "fields",
                                 "potential", "yukawa", "region", "checks", "tolerances"})
      if (!expanded_.contains(required)) complain(std::string("missing top-level key '") + required + "'");
    finish();
  }

  void load_dimension() {
    if (!expanded_["dimension"].is_number_integer()) {
      complain("dimension must be an integer");
      finish();
    }
    scene_.m = expanded_["dimension"].get<int>();
    if (scene_.m < 2 || scene_.m > 8) {
      complain("dimension must satisfy 2 <= m <= 8");
      finish();
    }
    scene_.config.m = scene_.m;
    symbols_.push_back("t");
    for (int i = 1; i < scene_.m; ++i) symbols_.push_back("x" + std::to_string(i));
  }

  void load_params() {
    // named constants usable in every expression: metric.params then fields.params
    auto collect = [&](const json& obj, const std::string& where) {
      if (!obj.is_object()) {
        complain(where + " must be an object of numbers");
        return;
      }
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.value().is_number()) {
          complain(where + "." + it.key() + " must be a number");
          continue;
        }
        if (std::find(symbols_.begin(), symbols_.end(), it.key()) != symbols_.end()) {
          complain("parameter '" + it.key() + "' collides with another symbol");
          continue;
        }
        symbols_.push_back(it.key());
        param_values_.push_back(it.value().get<double>());
      }
    };
    if (expanded_["metric"].is_object() && expanded_["metric"].contains("params"))
      collect(expanded_["metric"]["params"], "metric.params");
    if (expanded_["fields"].is_object() && expanded_["fields"].contains("params"))
      collect(expanded_["fields"]["params"], "fields.params");
  }

  std::vector<double> make_env(const RVec& x) const {
    std::vector<double> env(x.begin(), x.end());
    env.insert(env.end(), param_values_.begin(), param_values_.end());
    return env;
  }

  ExprPtr compile(const std::string& source, const std::string& where) {
    try {
      ExprPtr raw = parse_expression(source);
      std::vector<std::string> missing;
      ExprPtr bound = bind_expression(raw, symbols_, &missing);
      for (const auto& name : missing)
        complain(where + ": unknown identifier '" + name + "'");
      return bound;
    } catch (const Error& e) {
      complain(where + ": " + e.what());
      return nullptr;
    }
  }

  ExprPtr compile_node(const json& node, const std::string& where) {
    if (node.is_string()) return compile(node.get<std::string>(), where);
    if (node.is_number()) {
      auto e = std::make_shared<Expression>();
      e->kind = Expression::Kind::number;
      e->number = node.get<double>();
      return e;
    }
    complain(where + " must be an expression string or number");
    return nullptr;
  }

  void load_metric() {
    const json& mj = expanded_["metric"];
    scene_.config.metric = geometry::MetricFamily::minkowski(scene_.m);  // placeholder on error
    if (!mj.is_object() || !mj.contains("family") || !mj["family"].is_string()) {
      complain("metric needs a 'family' name");
      return;
    }
    std::string family = mj["family"].get<std::string>();
    const int m = scene_.m;
    double hubble = 0;
    if (mj.contains("params") && mj["params"].is_object() && mj["params"].contains("H"))
      hubble = mj["params"]["H"].get<double>();
    if (family == "minkowski") {
      scene_.config.metric = geometry::MetricFamily::minkowski(m);
    } else if (family == "desitter") {
      scene_.config.metric = geometry::MetricFamily::de_sitter(m, hubble);
    } else if (family == "flrw") {
      if (!mj.contains("a")) {
        complain("flrw metric needs a scale-factor expression 'a'");
        return;
      }
      ExprPtr a = compile_node(mj["a"], "metric.a");
      if (!a) return;
      auto params = param_values_;
      int mloc = m;
      auto env_of_t = [params, mloc](double t) {
        std::vector<double> env(mloc, 0.0);
        env[0] = t;
        env.insert(env.end(), params.begin(), params.end());
        return env;
      };
      scene_.config.metric = geometry::MetricFamily::flrw(
          m, [a, env_of_t](double t) { return eval_expression(a, env_of_t(t)); });
    } else if (family == "adm") {
      ExprPtr lapse = mj.contains("N") ? compile_node(mj["N"], "metric.N") : nullptr;
      if (!mj.contains("N")) complain("adm metric needs a lapse expression 'N'");
      std::vector<ExprPtr> beta;
      if (!mj.contains("beta") || !mj["beta"].is_array()) {
        complain("adm metric needs a shift array 'beta'");
      } else {
        if (static_cast<int>(mj["beta"].size()) != m - 1)
          complain("shift must have length m-1");
        int i = 0;
        for (const auto& b : mj["beta"])
          beta.push_back(compile_node(b, "metric.beta[" + std::to_string(i++) + "]"));
      }
      std::vector<std::vector<ExprPtr>> gbar;
      if (!mj.contains("gbar") || !mj["gbar"].is_array() ||
          static_cast<int>(mj["gbar"].size()) != m - 1) {
        complain("adm metric needs an (m-1)x(m-1) spatial metric 'gbar'");
      } else {
        int r = 0;
        for (const auto& row : mj["gbar"]) {
          if (!row.is_array() || static_cast<int>(row.size()) != m - 1) {
            complain("adm gbar row " + std::to_string(r) + " must have length m-1");
            ++r;
            continue;
          }
          std::vector<ExprPtr> rowv;
          int c = 0;
          for (const auto& cell : row)
            rowv.push_back(compile_node(
                cell, "metric.gbar[" + std::to_string(r) + "][" + std::to_string(c++) + "]"));
          gbar.push_back(std::move(rowv));
          ++r;
        }
      }
      if (!errors_.empty()) return;
      auto params = param_values_;
      int mloc = m;
      auto adm_fn = [lapse, beta, gbar, params, mloc](const RVec& x) {
        std::vector<double> env(x.begin(), x.end());
        env.insert(env.end(), params.begin(), params.end());
        geometry::AdmData a;
        a.m = mloc;
        a.N = eval_expression(lapse, env);
        a.beta.resize(mloc - 1);
        for (int i = 0; i < mloc - 1; ++i) a.beta[i] = eval_expression(beta[i], env);
        a.gbar = RMat(mloc - 1, mloc - 1);
        for (int r = 0; r < mloc - 1; ++r)
          for (int c = 0; c < mloc - 1; ++c) a.gbar(r, c) = eval_expression(gbar[r][c], env);
        return a;
      };
      scene_.config.metric = geometry::MetricFamily::from_adm(m, adm_fn, "adm");
    } else {
      complain("unknown metric family '" + family + "'");
    }
  }

  void load_algebra() {
    const json& aj = expanded_["algebra"];
    std::vector<std::string> factors;
    if (aj.is_string())
      factors.push_back(aj.get<std::string>());
    else if (aj.is_array())
      for (const auto& f : aj) {
        if (!f.is_string()) {
          complain("algebra factors must be strings");
          finish();
        }
        factors.push_back(f.get<std::string>());
      }
    else {
      complain("algebra must be a name or a list of factor names");
      factors = {"u1"};
    }
    try {
      scene_.config.algebra = gauge::build_lie_algebra(factors);
    } catch (const Error& e) {
      complain(e.what());
      scene_.config.algebra = gauge::build_lie_algebra({"u1"});
    }
  }

  std::vector<CMat> load_images(const json& rj, const std::string& where, int* dim_out) {
    const auto& alg = scene_.config.algebra;
    std::string preset = rj.value("preset", std::string("trivial"));
    int dim = rj.value("dim", 0);
    if (preset == "trivial") {
      *dim_out = dim;
      return std::vector<CMat>(alg.dim_g, CMat(dim, dim));
    }
    if (preset == "u1-charge") {
      if (alg.dim_g != 1) {
        complain(where + ": u1-charge preset needs the u1 algebra");
        *dim_out = dim;
        return std::vector<CMat>(alg.dim_g, CMat(dim, dim));
      }
      double q = rj.value("charge", 1.0);
      std::vector<CMat> im(1, CMat(dim, dim));
      for (int i = 0; i < dim; ++i) im[0](i, i) = cplx(0, q);
      *dim_out = dim;
      return im;
    }
    if (preset == "su2-fundamental") {
      if (alg.name != "su2") {
        complain(where + ": su2-fundamental preset needs the su2 algebra");
        *dim_out = 2;
        return std::vector<CMat>(alg.dim_g, CMat(2, 2));
      }
      *dim_out = 2;
      return alg.basis;
    }
    if (preset == "explicit") {
      if (!rj.contains("generators") || !rj["generators"].is_array() ||
          static_cast<int>(rj["generators"].size()) != alg.dim_g) {
        complain(where + ": explicit preset needs one generator image per basis element");
        *dim_out = dim;
        return std::vector<CMat>(alg.dim_g, CMat(dim, dim));
      }
      std::vector<CMat> im;
      int inferred = -1;
      for (const auto& gj : rj["generators"]) {
        int rows = static_cast<int>(gj.size());
        if (inferred < 0) inferred = rows;
        CMat g(rows, rows);
        int r = 0;
        for (const auto& row : gj) {
          if (static_cast<int>(row.size()) != rows) {
            complain(where + ": generator images must be square");
            break;
          }
          int c = 0;
          for (const auto& cell : row) {
            g(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
            ++c;
          }
          ++r;
        }
        im.push_back(std::move(g));
      }
      *dim_out = inferred < 0 ? 0 : inferred;
      return im;
    }
    complain(where + ": unknown representation preset '" + preset + "'");
    *dim_out = dim;
    return std::vector<CMat>(alg.dim_g, CMat(dim, dim));
  }

  void load_representations() {
    const json& rj = expanded_["representations"];
    if (!rj.is_object()) {
      complain("representations must be an object with 'rho' and 'chi'");
      return;
    }
    auto& rep = scene_.config.rep;
    const auto& alg = scene_.config.algebra;
    if (rj.contains("rho"))
      rep.rho = load_images(rj["rho"], "representations.rho", &rep.dim_w);
    else
      rep.rho.assign(alg.dim_g, CMat(0, 0));
    int dvp = 0, dvm = 0;
    std::vector<CMat> chi_p(alg.dim_g, CMat(0, 0)), chi_m(alg.dim_g, CMat(0, 0));
    if (rj.contains("chi") && rj["chi"].is_object()) {
      if (rj["chi"].contains("plus"))
        chi_p = load_images(rj["chi"]["plus"], "representations.chi.plus", &dvp);
      if (rj["chi"].contains("minus"))
        chi_m = load_images(rj["chi"]["minus"], "representations.chi.minus", &dvm);
    }
    rep.dim_v_plus = dvp;
    rep.dim_v_minus = dvm;
    if (scene_.m % 2 == 1 && dvm > 0)
      complain("chiral twist data (chi.minus) is only meaningful for even dimensions");
    rep.chi.clear();
    for (int a = 0; a < alg.dim_g; ++a) {
      CMat full(dvp + dvm, dvp + dvm);
      for (int i = 0; i < dvp; ++i)
        for (int j = 0; j < dvp; ++j) full(i, j) = chi_p[a](i, j);
      for (int i = 0; i < dvm; ++i)
        for (int j = 0; j < dvm; ++j) full(dvp + i, dvp + j) = chi_m[a](i, j);
      rep.chi.push_back(std::move(full));
    }
    if (rep.unitarity_residual() > 1e-10)
      complain("representation images must be anti-Hermitian and block-preserving");
  }

  void load_potential() {
    const json& pj = expanded_["potential"];
    if (!pj.is_object() || !pj.contains("kind")) {
      complain("potential needs a 'kind'");
      return;
    }
    std::string kind = pj["kind"].get<std::string>();
    auto& pot = scene_.config.potential;
    if (kind == "none")
      pot.kind = gauge::Potential::Kind::none;
    else if (kind == "mexican_hat")
      pot.kind = gauge::Potential::Kind::mexican_hat;
    else if (kind == "conformal")
      pot.kind = gauge::Potential::Kind::conformal;
    else {
      complain("unknown potential kind '" + kind + "'");
      return;
    }
    pot.lambda = pj.value("lambda", 0.0);
    pot.mu = pj.value("mu", 0.0);
    try {
      pot.validate();
    } catch (const Error& e) {
      complain(e.what());
    }
  }

  void load_yukawa() {
    const json& yj = expanded_["yukawa"];
    if (!yj.is_object() || !yj.contains("kind")) {
      complain("yukawa needs a 'kind'");
      return;
    }
    auto& yk = scene_.config.yukawa;
    auto& rep = scene_.config.rep;
    yk.dim_w = rep.dim_w;
    yk.dim_v_plus = rep.dim_v_plus;
    yk.dim_v_minus = rep.dim_v_minus;
    std::string kind = yj["kind"].get<std::string>();
    if (kind == "zero") {
      yk.kind = gauge::YukawaModel::Kind::zero;
    } else if (kind == "mass") {
      yk.kind = gauge::YukawaModel::Kind::mass;
      yk.mass = yj.value("m", 0.0);
      if (scene_.m % 2 == 0) complain("the mass yukawa kind is for odd dimensions");
    } else if (kind == "block") {
      yk.kind = gauge::YukawaModel::Kind::block;
      if (!yj.contains("blocks") || !yj["blocks"].is_array() ||
          static_cast<int>(yj["blocks"].size()) != rep.dim_w) {
        complain("block yukawa needs one V+ -> V- block per Higgs basis element");
        return;
      }
      for (const auto& bj : yj["blocks"]) {
        CMat b(rep.dim_v_minus, rep.dim_v_plus);
        if (static_cast<int>(bj.size()) != rep.dim_v_minus) {
          complain("yukawa block has wrong row count");
          return;
        }
        int r = 0;
        for (const auto& row : bj) {
          if (static_cast<int>(row.size()) != rep.dim_v_plus) {
            complain("yukawa block has wrong column count");
            return;
          }
          int c = 0;
          for (const auto& cell : row) {
            b(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
            ++c;
          }
          ++r;
        }
        yk.blocks.push_back(std::move(b));
      }
    } else {
      complain("unknown yukawa kind '" + kind + "'");
    }
  }

  std::vector<std::vector<ExprPtr>> compile_pair_list(const json& arr, int count,
                                                      const std::string& where) {
    std::vector<std::vector<ExprPtr>> out;
    if (!arr.is_array() || static_cast<int>(arr.size()) != count) {
      complain(where + " must be a list of " + std::to_string(count) + " [re, im] pairs");
      return out;
    }
    int i = 0;
    for (const auto& pair : arr) {
      if (!pair.is_array() || pair.size() != 2) {
        complain(where + "[" + std::to_string(i) + "] must be an [re, im] pair");
        ++i;
        continue;
      }
      std::vector<ExprPtr> p;
      p.push_back(compile_node(pair[0], where + "[" + std::to_string(i) + "].re"));
      p.push_back(compile_node(pair[1], where + "[" + std::to_string(i) + "].im"));
      out.push_back(std::move(p));
      ++i;
    }
    return out;
  }

  void load_fields() {
    const json& fj = expanded_["fields"];
    if (!fj.is_object()) {
      complain("fields must be an object");
      return;
    }
    const int m = scene_.m;
    auto& cfg = scene_.config;
    try {
      cfg.cliff = clifford::build_clifford_model(m);
    } catch (const Error& e) {
      complain(e.what());
      return;
    }
    auto params = param_values_;

    if (fj.contains("A") && !fj["A"].is_null()) {
      const json& aj = fj["A"];
      const int dg = cfg.algebra.dim_g;
      std::vector<std::vector<ExprPtr>> a_expr;
      if (!aj.is_array() || static_cast<int>(aj.size()) != m) {
        complain("fields.A must have one entry per coordinate");
      } else {
        int ai = 0;
        for (const auto& row : aj) {
          std::vector<ExprPtr> rowv;
          if (!row.is_array() || static_cast<int>(row.size()) != dg) {
            complain("fields.A[" + std::to_string(ai) + "] must have one component per generator");
          } else {
            int c = 0;
            for (const auto& cell : row)
              rowv.push_back(
                  compile_node(cell, "fields.A[" + std::to_string(ai) + "][" + std::to_string(c++) + "]"));
          }
          a_expr.push_back(std::move(rowv));
          ++ai;
        }
      }
      if (errors_.empty()) {
        int mloc = m, dgl = dg;
        cfg.connection = [a_expr, params, mloc, dgl](const RVec& x) {
          std::vector<double> env(x.begin(), x.end());
          env.insert(env.end(), params.begin(), params.end());
          std::vector<RVec> a(mloc, RVec(dgl, 0.0));
          for (int i = 0; i < mloc; ++i)
            for (int c = 0; c < dgl; ++c) a[i][c] = eval_expression(a_expr[i][c], env);
          return a;
        };
      }
    }

    if (fj.contains("higgs") && !fj["higgs"].is_null()) {
      if (cfg.rep.dim_w == 0) complain("a higgs field needs a nonzero-dimensional rho target");
      auto ph = compile_pair_list(fj["higgs"], cfg.rep.dim_w, "fields.higgs");
      if (errors_.empty()) {
        int dw = cfg.rep.dim_w;
        cfg.higgs = [ph, params, dw, m](const RVec& x) {
          std::vector<double> env(x.begin(), x.end());
          env.insert(env.end(), params.begin(), params.end());
          CVec phi(dw);
          for (int i = 0; i < dw; ++i)
            phi[i] = cplx(eval_expression(ph[i][0], env), eval_expression(ph[i][1], env));
          return phi;
        };
      }
    }

    if (fj.contains("spinor") && !fj["spinor"].is_null()) {
      int dv = cfg.rep.dim_v();
      if (dv == 0) {
        complain("a spinor field needs a nonzero twist space (chi dims)");
        return;
      }
      int n = cfg.cliff.dim * dv;
      auto ps = compile_pair_list(fj["spinor"], n, "fields.spinor");
      if (errors_.empty()) {
        cfg.spinor = [ps, params, n, m](const RVec& x) {
          std::vector<double> env(x.begin(), x.end());
          env.insert(env.end(), params.begin(), params.end());
          CVec psi(n);
          for (int i = 0; i < n; ++i)
            psi[i] = cplx(eval_expression(ps[i][0], env), eval_expression(ps[i][1], env));
          return psi;
        };
      }
    }
  }

  void load_region() {
    const json& rj = expanded_["region"];
    if (!rj.is_object() || !rj.contains("center") || !rj.contains("half_widths")) {
      complain("region needs 'center' and 'half_widths'");
      return;
    }
    auto& reg = scene_.region;
    for (const auto& v : rj["center"]) reg.center.push_back(v.get<double>());
    for (const auto& v : rj["half_widths"]) reg.half_widths.push_back(v.get<double>());
    if (static_cast<int>(reg.center.size()) != scene_.m) complain("region center must have length m");
    if (static_cast<int>(reg.half_widths.size()) != scene_.m)
      complain("region half_widths must have length m");
    if (rj.contains("samples")) {
      for (const auto& v : rj["samples"]) reg.samples.push_back(v.get<int>());
      if (static_cast<int>(reg.samples.size()) != scene_.m)
        complain("region samples must have length m");
    } else {
      int per_axis = rj.value("samples_per_axis", 2);
      reg.samples.assign(scene_.m, per_axis);
    }
    for (int s : reg.samples)
      if (s < 1) complain("region samples must be >= 1");
  }

  void load_checks() {
    const json& cj = expanded_["checks"];
    if (!cj.is_array()) {
      complain("checks must be a list");
      return;
    }
    for (const auto& c : cj) {
      std::string name = c.get<std::string>();
      if (std::find(kKnownChecks.begin(), kKnownChecks.end(), name) == kKnownChecks.end())
        complain("unknown check '" + name + "'");
      scene_.checks.push_back(name);
    }
  }

  void load_tolerances() {
    const json& tj = expanded_["tolerances"];
    if (!tj.is_object()) {
      complain("tolerances must be an object");
      return;
    }
    auto& t = scene_.tol;
    t.identity = tj.value("identity", t.identity);
    t.solution = tj.value("solution", t.solution);
    t.condition = tj.value("condition", t.condition);
    t.fd_identity = tj.value("fd_identity", t.fd_identity);
    t.variational = tj.value("variational", t.variational);
    t.h = tj.value("h", t.h);
    t.order = tj.value("order", t.order);
    t.div_h = tj.value("div_h", t.div_h);
    t.div_order = tj.value("div_order", t.div_order);
    if (t.h <= 0 || t.div_h <= 0) complain("stencil steps must be positive");
    if ((t.order != 2 && t.order != 4) || (t.div_order != 2 && t.div_order != 4))
      complain("stencil orders must be 2 or 4");
  }
};

}  // namespace

Scene load_scene(const json& document) { return Loader(document).run(); }

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open scene file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::parse, std::string("scene file is not valid JSON: ") + e.what());
  }
  return load_scene(doc);
}

std::string scene_hash(const json& document) {
  // canonical form: sorted keys
  nlohmann::json sorted = nlohmann::json::parse(document.dump());
  std::string canon = sorted.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace emtlab::scene
