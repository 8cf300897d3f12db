#include "emtlab/runner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace emtlab::cli {

namespace {

using scene::Report;
using scene::Scene;

std::string seed_hex_string(uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
  return buf;
}

int thread_count(const Options& opt) {
  return opt.threads > 0 ? opt.threads : numerics::default_thread_count();
}

struct ActiveSector {
  std::string name;
  const emt::EnergyMomentumTensor* tensor;
};

std::vector<ActiveSector> active_sectors(const emt::SectorSet& s) {
  std::vector<ActiveSector> out;
  if (s.has_ym) out.push_back({"yang_mills", &s.ym});
  if (s.has_higgs) out.push_back({"higgs", &s.higgs});
  if (s.has_chiggs) out.push_back({"conformal_higgs", &s.chiggs});
  if (s.has_dirac) out.push_back({"dirac", &s.dirac});
  if (out.size() > 1) out.push_back({"total", &s.total});
  return out;
}

scene::PointRecord point_conditions(const Scene& sc, int index, const RVec& x) {
  scene::PointRecord rec;
  rec.index = index;
  rec.coords = x;
  emt::SectorSet s = emt::evaluate_sectors(sc.config, x, sc.jet_stencil());
  for (const auto& as : active_sectors(s)) {
    for (auto verdict : energycond::check_all_conditions(*as.tensor, sc.tol.condition)) {
      scene::ConditionRecord c;
      c.sector = as.name;
      c.condition = energycond::condition_name(verdict.condition);
      c.status = energycond::status_name(verdict.status);
      c.margin = verdict.margin;
      c.witness = verdict.witness;
      rec.conditions.push_back(std::move(c));
    }
  }
  return rec;
}

Report base_report(const Scene& sc, const Options& opt) {
  Report rep;
  rep.command = opt.command;
  rep.scene_hash = sc.hash;
  rep.seed_hex = seed_hex_string(opt.seed);
  rep.tolerances = {{"identity", sc.tol.identity},   {"solution", sc.tol.solution},
                    {"condition", sc.tol.condition}, {"fd_identity", sc.tol.fd_identity},
                    {"variational", sc.tol.variational}, {"h", sc.tol.h},
                    {"order", static_cast<double>(sc.tol.order)}, {"div_h", sc.tol.div_h},
                    {"div_order", static_cast<double>(sc.tol.div_order)}};
  return rep;
}

// C-infinity bump supported on the region box, used by the variational row.
std::function<RMat(const RVec&)> bump_perturbation(const geometry::Region& region, int m,
                                                   uint64_t seed) {
  numerics::Rng rng(seed);
  RMat s(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      s(a, b) = rng.uniform(-0.5, 0.5);
      s(b, a) = s(a, b);
    }
  RVec center = region.center, hw = region.half_widths;
  return [s, center, hw, m](const RVec& x) {
    double bump = 1;
    for (int a = 0; a < m; ++a) {
      double u = (x[a] - center[a]) / hw[a];
      double w = 1 - u * u;
      if (w <= 0) return RMat(m, m);
      bump *= std::exp(1.0 - 1.0 / w);
    }
    return s * bump;
  };
}

}  // namespace

void apply_overrides(Scene& sc, const Options& opt) {
  if (opt.h) sc.tol.h = *opt.h;
  if (opt.order) sc.tol.order = *opt.order;
  if (opt.tol) sc.tol.condition = *opt.tol;
  if (opt.samples) sc.region.samples.assign(sc.m, *opt.samples);
  sc.jet_stencil();  // validates overrides
  sc.div_stencil();
}

Report run_emt(const Scene& sc, const Options& opt) {
  Report rep = base_report(sc, opt);
  const int n = sc.region.total_points();
  std::vector<scene::PointRecord> records(n);
  numerics::parallel_for(
      n,
      [&](int i) {
        RVec x = sc.region.point(i);
        scene::PointRecord rec;
        rec.index = i;
        rec.coords = x;
        emt::SectorSet s = emt::evaluate_sectors(sc.config, x, sc.jet_stencil());
        for (const auto& as : active_sectors(s)) {
          rec.tensors.emplace_back(as.name, as.tensor->comps);
          rec.scalars.emplace_back("trace_" + as.name, as.tensor->trace_eta());
        }
        rec.scalars.emplace_back("f_norm2", s.f_norm2);
        rec.scalars.emplace_back("dphi_norm2", s.dphi_norm2);
        rec.scalars.emplace_back("potential", s.potential_value);
        records[i] = std::move(rec);
      },
      thread_count(opt));
  rep.points = std::move(records);
  return rep;
}

Report run_check(const Scene& sc, const Options& opt) {
  Report rep = base_report(sc, opt);
  const int n = sc.region.total_points();
  std::vector<scene::PointRecord> records(n);
  numerics::parallel_for(
      n, [&](int i) { records[i] = point_conditions(sc, i, sc.region.point(i)); },
      thread_count(opt));
  rep.points = std::move(records);
  return rep;
}

Report run_classify(const Scene& sc, const Options& opt) {
  Report rep = run_check(sc, opt);
  rep.command = opt.command;
  if (rep.points.empty()) return rep;
  for (size_t ci = 0; ci < rep.points[0].conditions.size(); ++ci) {
    scene::AggregateRow row;
    row.sector = rep.points[0].conditions[ci].sector;
    row.condition = rep.points[0].conditions[ci].condition;
    bool any_violated = false, any_inconclusive = false;
    row.margin = rep.points[0].conditions[ci].margin;
    row.worst_point = 0;
    row.witness = rep.points[0].conditions[ci].witness;
    for (const auto& p : rep.points) {
      const auto& c = p.conditions[ci];
      if (c.margin < row.margin) {
        row.margin = c.margin;
        row.worst_point = p.index;
        row.witness = c.witness;
      }
      any_violated |= (c.status == "violated");
      any_inconclusive |= (c.status == "inconclusive-numerical");
    }
    row.status = any_violated ? "violated" : (any_inconclusive ? "inconclusive-numerical" : "holds");
    rep.aggregate.push_back(std::move(row));
  }
  return rep;
}

Report run_verify(const Scene& sc, const Options& opt) {
  Report rep = base_report(sc, opt);
  const auto& cfg = sc.config;
  const int n = sc.region.total_points();
  auto jet_st = sc.jet_stencil();
  auto div_st = sc.div_stencil();
  auto has_check = [&](const std::string& name) {
    for (const auto& c : sc.checks)
      if (c == name) return true;
    return false;
  };
  auto add_row = [&](const std::string& name, double value, double tol) {
    rep.residuals.push_back({name, value, tol, value <= tol});
  };
  const bool conformal = cfg.potential.kind == gauge::Potential::Kind::conformal;

  if (has_check("traces")) {
    double ym = 0, higgs = 0, dirac = 0, dirac_os = 0, chiggs_os = 0, csm_os = 0;
    for (int i = 0; i < n; ++i) {
      emt::SectorSet s = emt::evaluate_sectors(cfg, sc.region.point(i), jet_st);
      auto tr = emt::trace_check(s, cfg);
      if (tr.yang_mills) ym = std::max(ym, *tr.yang_mills);
      if (tr.higgs) higgs = std::max(higgs, *tr.higgs);
      if (tr.dirac_algebraic) dirac = std::max(dirac, *tr.dirac_algebraic);
      if (tr.dirac_on_shell) dirac_os = std::max(dirac_os, *tr.dirac_on_shell);
      if (tr.chiggs_on_shell) chiggs_os = std::max(chiggs_os, *tr.chiggs_on_shell);
      if (tr.total_conformal_on_shell) csm_os = std::max(csm_os, *tr.total_conformal_on_shell);
    }
    if (cfg.has_connection()) add_row("trace_yang_mills", ym, sc.tol.identity);
    if (cfg.has_higgs() && !conformal) add_row("trace_higgs", higgs, sc.tol.identity);
    if (cfg.has_spinor()) add_row("trace_dirac", dirac, sc.tol.identity);
    if (sc.solution_flag) {
      if (cfg.has_spinor()) add_row("trace_dirac_on_shell", dirac_os, sc.tol.solution);
      if (conformal && cfg.has_higgs()) {
        add_row("trace_conformal_higgs_on_shell", chiggs_os, sc.tol.solution);
        add_row("trace_conformal_total_on_shell", csm_os, sc.tol.solution);
      }
    }
  }

  if (has_check("divergence")) {
    double ym = 0, higgs = 0, total = 0;
    for (int i = 0; i < n; ++i) {
      auto dr = emt::divergence_identity_check(cfg, sc.region.point(i), jet_st, div_st,
                                               sc.solution_flag);
      if (dr.ym_off_shell) ym = std::max(ym, *dr.ym_off_shell);
      if (dr.higgs_off_shell) higgs = std::max(higgs, *dr.higgs_off_shell);
      if (dr.total_on_shell) total = std::max(total, *dr.total_on_shell);
    }
    if (cfg.has_connection()) add_row("divergence_yang_mills_identity", ym, sc.tol.fd_identity);
    if (cfg.has_higgs() && !conformal)
      add_row("divergence_higgs_identity", higgs, sc.tol.fd_identity);
    if (sc.solution_flag) add_row("divergence_total_on_shell", total, sc.tol.solution);
  }

  if (has_check("el_residuals") && sc.solution_flag) {
    double ym = 0, higgs = 0, dirac = 0;
    for (int i = 0; i < n; ++i) {
      auto el = gauge::el_residuals(cfg, sc.region.point(i), jet_st);
      ym = std::max(ym, el.norm_yang_mills());
      if (cfg.has_higgs()) higgs = std::max(higgs, el.norm_higgs());
      if (cfg.has_spinor()) dirac = std::max(dirac, el.norm_dirac());
    }
    add_row("el_yang_mills", ym, sc.tol.solution);
    if (cfg.has_higgs()) add_row("el_higgs", higgs, sc.tol.solution);
    if (cfg.has_spinor()) add_row("el_dirac", dirac, sc.tol.solution);
  }

  if (has_check("weitzenboeck") && cfg.has_spinor()) {
    double worst = 0;
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, gauge::weitzenboeck_residual(cfg, sc.region.point(i), jet_st));
    add_row("weitzenboeck", worst, sc.tol.fd_identity);
  }

  if (has_check("variational") && !cfg.has_spinor() && !conformal) {
    geometry::Region quad = sc.region;
    for (auto& s : quad.samples) s = std::max(s, 9);
    auto h_field = bump_perturbation(sc.region, sc.m, opt.seed);
    auto vr = emt::variational_oracle(cfg, h_field, quad, 1e-4, thread_count(opt));
    add_row("variational_rel_error", vr.rel_error(), sc.tol.variational);
  }

  return rep;
}

Report run_scan(const scene::json& doc, const Options& opt) {
  Report rep;
  rep.command = opt.command;
  rep.seed_hex = seed_hex_string(opt.seed);
  if (opt.scan_param.empty()) fail(ErrorKind::parameter, "scan needs --param");
  if (opt.scan_steps < 1) fail(ErrorKind::parameter, "scan needs --steps >= 1");

  for (int step = 0; step < opt.scan_steps; ++step) {
    double value = (opt.scan_steps == 1)
                       ? opt.scan_from
                       : opt.scan_from + (opt.scan_to - opt.scan_from) * step / (opt.scan_steps - 1);
    scene::json modified = doc;
    // builtin expansion must happen before the override lands
    if (modified.contains("builtin")) {
      scene::json base = scene::builtin_document(modified["builtin"].get<std::string>());
      modified.erase("builtin");
      base.merge_patch(modified);
      modified = base;
    }
    bool placed = false;
    if (modified["fields"].contains("params") &&
        modified["fields"]["params"].contains(opt.scan_param)) {
      modified["fields"]["params"][opt.scan_param] = value;
      placed = true;
    } else if (modified["metric"].is_object() && modified["metric"].contains("params") &&
               modified["metric"]["params"].contains(opt.scan_param)) {
      modified["metric"]["params"][opt.scan_param] = value;
      placed = true;
    } else if ((opt.scan_param == "lambda" || opt.scan_param == "mu") &&
               modified["potential"].is_object()) {
      modified["potential"][opt.scan_param] = value;
      placed = true;
    }
    if (!placed)
      fail(ErrorKind::parameter, "scan parameter '" + opt.scan_param + "' not found in the scene");

    Scene sc = scene::load_scene(modified);
    apply_overrides(sc, opt);
    if (rep.scene_hash.empty()) rep.scene_hash = sc.hash;
    Report cls = run_classify(sc, opt);
    for (const auto& row : cls.aggregate)
      rep.scan.push_back({opt.scan_param, value, row.sector, row.condition, row.status, row.margin});
  }
  return rep;
}

namespace {

void print_summary(const Report& rep, std::ostream& out) {
  if (!rep.residuals.empty()) {
    out << "check                                   value          tolerance      result\n";
    for (const auto& r : rep.residuals) {
      char line[160];
      std::snprintf(line, sizeof line, "%-38s  %-13.6g  %-13.6g  %s", r.name.c_str(), r.value,
                    r.tolerance, r.pass ? "pass" : "FAIL");
      out << line << "\n";
    }
    return;
  }
  if (!rep.scan.empty()) {
    out << "param           value        sector            condition  status        margin\n";
    for (const auto& s : rep.scan) {
      char line[200];
      std::snprintf(line, sizeof line, "%-14s  %-11.5g  %-16s  %-9s  %-12s  %.6g",
                    s.param.c_str(), s.value, s.sector.c_str(), s.condition.c_str(),
                    s.status.c_str(), s.margin);
      out << line << "\n";
    }
    return;
  }
  if (!rep.aggregate.empty()) {
    out << "sector            condition  status                  margin\n";
    for (const auto& a : rep.aggregate) {
      char line[200];
      std::snprintf(line, sizeof line, "%-16s  %-9s  %-22s  %.6g", a.sector.c_str(),
                    a.condition.c_str(), a.status.c_str(), a.margin);
      out << line << "\n";
      if (a.status == "violated") {
        out << "    witness xi = [";
        for (size_t i = 0; i < a.witness.size(); ++i)
          out << (i ? ", " : "") << scene::format_number(a.witness[i]);
        out << "] at point " << a.worst_point << "\n";
      }
    }
    return;
  }
  size_t violations = 0;
  for (const auto& p : rep.points)
    for (const auto& c : p.conditions)
      if (c.status == "violated") ++violations;
  out << rep.points.size() << " points evaluated";
  if (violations) out << ", " << violations << " condition violations";
  out << "\n";
  for (const auto& p : rep.points)
    for (const auto& c : p.conditions)
      if (c.status == "violated") {
        out << "  point " << p.index << " " << c.sector << " " << c.condition
            << " violated, margin = " << scene::format_number(c.margin) << ", witness xi = [";
        for (size_t i = 0; i < c.witness.size(); ++i)
          out << (i ? ", " : "") << scene::format_number(c.witness[i]);
        out << "]\n";
      }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"energy-momentum tensors and energy conditions on Lorentzian backgrounds"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h for the stencil step

  std::string seed_text = "0x5EED";
  for (const char* name : {"emt", "verify", "check", "classify", "scan"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->set_help_flag("--help", "print help");
    sub->add_option("--scene", opt.scene_path, "scene document (JSON)")->required();
    sub->add_option("--out", opt.out_path, "report output path");
    sub->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option_function<double>("--h", [&opt](double v) { opt.h = v; }, "jet stencil step");
    sub->add_option_function<int>("--order", [&opt](int v) { opt.order = v; }, "stencil order");
    sub->add_option_function<double>("--tol", [&opt](double v) { opt.tol = v; },
                                     "condition tolerance");
    sub->add_option_function<int>("--samples", [&opt](int v) { opt.samples = v; },
                                  "samples per region axis");
    sub->add_option("--seed", seed_text, "random seed (hex)");
    sub->add_option("--threads", opt.threads, "worker thread count");
    if (std::string(name) == "scan") {
      sub->add_option("--param", opt.scan_param, "scene parameter to sweep")->required();
      sub->add_option("--from", opt.scan_from, "sweep start")->required();
      sub->add_option("--to", opt.scan_to, "sweep end")->required();
      sub->add_option("--steps", opt.scan_steps, "sweep step count")->required();
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    opt.command = app.get_subcommands().front()->get_name();
    opt.seed = std::stoull(seed_text, nullptr, 16);
    if (opt.threads == 0) {
      const char* env = std::getenv("EMTLAB_THREADS");
      if (env) opt.threads = std::max(0, atoi(env));
    }

    Report rep;
    if (opt.command == "scan") {
      std::ifstream in(opt.scene_path);
      if (!in) fail(ErrorKind::io, "cannot open scene file: " + opt.scene_path);
      scene::json doc = scene::json::parse(in, nullptr, true);
      rep = run_scan(doc, opt);
    } else {
      Scene sc = scene::load_scene_file(opt.scene_path);
      apply_overrides(sc, opt);
      if (opt.command == "emt")
        rep = run_emt(sc, opt);
      else if (opt.command == "verify")
        rep = run_verify(sc, opt);
      else if (opt.command == "check")
        rep = run_check(sc, opt);
      else
        rep = run_classify(sc, opt);
    }

    if (!opt.out_path.empty()) scene::write_report(rep, opt.out_path, opt.format);
    print_summary(rep, out);
    return rep.has_violation() ? 2 : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace emtlab::cli
