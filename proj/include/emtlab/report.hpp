#pragma once

// Report structures and their deterministic serializations.  JSON output
// has a fixed key order and decimal numbers with 17 significant digits, so
// identical inputs produce byte-identical documents.

#include <string>
#include <vector>

#include "emtlab/linalg.hpp"
#include "emtlab/scene.hpp"

namespace emtlab::scene {

struct ConditionRecord {
  std::string sector;
  std::string condition;
  std::string status;
  double margin = 0;
  RVec witness;
};

struct PointRecord {
  int index = 0;
  RVec coords;
  std::vector<std::pair<std::string, RMat>> tensors;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<ConditionRecord> conditions;
};

struct AggregateRow {
  std::string sector;
  std::string condition;
  std::string status;
  double margin = 0;
  RVec witness;
  int worst_point = -1;
};

struct VerifyRow {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

struct ScanRow {
  std::string param;
  double value = 0;
  std::string sector;
  std::string condition;
  std::string status;
  double margin = 0;
};

struct Report {
  std::string tool = "emtlab 0.1.0";
  std::string command;
  std::string scene_hash;
  std::string seed_hex;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<PointRecord> points;
  std::vector<AggregateRow> aggregate;
  std::vector<VerifyRow> residuals;
  std::vector<ScanRow> scan;

  bool has_violation() const;
};

std::string format_number(double v);  // %.17g
std::string report_to_json(const Report& r);
std::string report_to_csv(const Report& r);
void write_report(const Report& r, const std::string& path, const std::string& format);

}  // namespace emtlab::scene
