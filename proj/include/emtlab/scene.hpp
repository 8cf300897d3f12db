#pragma once

// Scene-document ingestion: JSON schema validation, expression compilation
// into FieldConfig callables, the catalog of built-in exact-solution
// scenarios, and the document hash used for report provenance.

#include <string>
#include <vector>

#include <json.hpp>

#include "emtlab/expression.hpp"
#include "emtlab/gauge.hpp"

namespace emtlab::scene {

using json = nlohmann::ordered_json;

struct Tolerances {
  double identity = 1e-12;
  double solution = 1e-8;
  double condition = 1e-10;
  double fd_identity = 1e-3;
  double variational = 1e-5;
  double h = 1e-3;
  int order = 4;
  double div_h = 5e-3;
  int div_order = 2;
};

struct Scene {
  int m = 0;
  gauge::FieldConfig config;
  geometry::Region region;
  std::vector<std::string> checks;
  Tolerances tol;
  bool solution_flag = false;
  std::string hash;
  json document;  // fully expanded (builtins resolved)

  numerics::Stencil jet_stencil() const { return numerics::Stencil(tol.order, tol.h); }
  numerics::Stencil div_stencil() const { return numerics::Stencil(tol.div_order, tol.div_h); }
};

// Validates and compiles a scene document; throws Error(validation) listing
// every failure.  A "builtin" key expands a catalog scene first, with the
// remaining document keys deep-merged on top.
Scene load_scene(const json& document);
Scene load_scene_file(const std::string& path);

std::vector<std::string> builtin_names();
json builtin_document(const std::string& name);

// FNV-1a over the canonical (key-sorted) serialization.
std::string scene_hash(const json& document);

}  // namespace emtlab::scene
