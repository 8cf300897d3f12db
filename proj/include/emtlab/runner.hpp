#pragma once

// Batch front end: the five commands behind the emtlab binary, exposed as
// functions so tests can drive them in-process.

#include <cstdint>
#include <optional>
#include <ostream>

#include "emtlab/energycond.hpp"
#include "emtlab/report.hpp"
#include "emtlab/scene.hpp"

namespace emtlab::cli {

struct Options {
  std::string command;
  std::string scene_path;
  std::string out_path;
  std::string format = "json";
  std::optional<double> h;
  std::optional<int> order;
  std::optional<double> tol;
  std::optional<int> samples;
  uint64_t seed = numerics::kDefaultSeed;
  int threads = 0;  // 0 = default parallelism
  std::string scan_param;
  double scan_from = 0, scan_to = 1;
  int scan_steps = 2;
};

void apply_overrides(scene::Scene& sc, const Options& opt);

scene::Report run_emt(const scene::Scene& sc, const Options& opt);
scene::Report run_check(const scene::Scene& sc, const Options& opt);
scene::Report run_classify(const scene::Scene& sc, const Options& opt);
scene::Report run_verify(const scene::Scene& sc, const Options& opt);
scene::Report run_scan(const scene::json& doc, const Options& opt);

// Exit codes: 0 all checks hold, 2 violation or witness found, 1 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emtlab::cli
