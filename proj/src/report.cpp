#include "emtlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace emtlab::scene {

namespace {

void append_vec(std::string& s, const RVec& v) {
  s += "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  s += "]";
}

void append_mat(std::string& s, const RMat& m) {
  s += "[";
  for (int r = 0; r < m.rows; ++r) {
    if (r) s += ", ";
    RVec row(m.cols);
    for (int c = 0; c < m.cols; ++c) row[c] = m(r, c);
    append_vec(s, row);
  }
  s += "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string join_semicolon(const RVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Report::has_violation() const {
  for (const auto& p : points)
    for (const auto& c : p.conditions)
      if (c.status == "violated") return true;
  for (const auto& a : aggregate)
    if (a.status == "violated") return true;
  for (const auto& r : residuals)
    if (!r.pass) return true;
  for (const auto& s : scan)
    if (s.status == "violated") return true;
  return false;
}

std::string report_to_json(const Report& r) {
  std::string s;
  s += "{\n";
  s += "  \"provenance\": {";
  s += "\"tool\": " + quoted(r.tool) + ", ";
  s += "\"command\": " + quoted(r.command) + ", ";
  s += "\"scene_hash\": " + quoted(r.scene_hash) + ", ";
  s += "\"seed\": " + quoted(r.seed_hex) + ", ";
  s += "\"tolerances\": {";
  for (size_t i = 0; i < r.tolerances.size(); ++i) {
    if (i) s += ", ";
    s += quoted(r.tolerances[i].first) + ": " + format_number(r.tolerances[i].second);
  }
  s += "}},\n";

  s += "  \"points\": [";
  for (size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    if (i) s += ",";
    s += "\n    {\"index\": " + std::to_string(p.index) + ", \"coords\": ";
    append_vec(s, p.coords);
    if (!p.tensors.empty()) {
      s += ", \"tensors\": {";
      for (size_t t = 0; t < p.tensors.size(); ++t) {
        if (t) s += ", ";
        s += quoted(p.tensors[t].first) + ": ";
        append_mat(s, p.tensors[t].second);
      }
      s += "}";
    }
    if (!p.scalars.empty()) {
      s += ", \"scalars\": {";
      for (size_t t = 0; t < p.scalars.size(); ++t) {
        if (t) s += ", ";
        s += quoted(p.scalars[t].first) + ": " + format_number(p.scalars[t].second);
      }
      s += "}";
    }
    if (!p.conditions.empty()) {
      s += ", \"conditions\": [";
      for (size_t c = 0; c < p.conditions.size(); ++c) {
        const auto& v = p.conditions[c];
        if (c) s += ", ";
        s += "{\"sector\": " + quoted(v.sector) + ", \"condition\": " + quoted(v.condition) +
             ", \"status\": " + quoted(v.status) + ", \"margin\": " + format_number(v.margin) +
             ", \"witness\": ";
        append_vec(s, v.witness);
        s += "}";
      }
      s += "]";
    }
    s += "}";
  }
  s += "],\n";

  s += "  \"aggregate\": [";
  for (size_t i = 0; i < r.aggregate.size(); ++i) {
    const auto& a = r.aggregate[i];
    if (i) s += ",";
    s += "\n    {\"sector\": " + quoted(a.sector) + ", \"condition\": " + quoted(a.condition) +
         ", \"status\": " + quoted(a.status) + ", \"margin\": " + format_number(a.margin) +
         ", \"worst_point\": " + std::to_string(a.worst_point) + ", \"witness\": ";
    append_vec(s, a.witness);
    s += "}";
  }
  s += "],\n";

  s += "  \"residuals\": [";
  for (size_t i = 0; i < r.residuals.size(); ++i) {
    const auto& v = r.residuals[i];
    if (i) s += ",";
    s += "\n    {\"name\": " + quoted(v.name) + ", \"value\": " + format_number(v.value) +
         ", \"tolerance\": " + format_number(v.tolerance) +
         ", \"pass\": " + (v.pass ? std::string("true") : std::string("false")) + "}";
  }
  s += "],\n";

  s += "  \"scan\": [";
  for (size_t i = 0; i < r.scan.size(); ++i) {
    const auto& v = r.scan[i];
    if (i) s += ",";
    s += "\n    {\"param\": " + quoted(v.param) + ", \"value\": " + format_number(v.value) +
         ", \"sector\": " + quoted(v.sector) + ", \"condition\": " + quoted(v.condition) +
         ", \"status\": " + quoted(v.status) + ", \"margin\": " + format_number(v.margin) + "}";
  }
  s += "]\n";
  s += "}\n";
  return s;
}

std::string report_to_csv(const Report& r) {
  std::string s;
  if (!r.residuals.empty()) {
    s += "name,value,tolerance,pass\n";
    for (const auto& v : r.residuals)
      s += v.name + "," + format_number(v.value) + "," + format_number(v.tolerance) + "," +
           (v.pass ? "true" : "false") + "\n";
    return s;
  }
  if (!r.scan.empty()) {
    s += "param,value,sector,condition,status,margin\n";
    for (const auto& v : r.scan)
      s += v.param + "," + format_number(v.value) + "," + v.sector + "," + v.condition + "," +
           v.status + "," + format_number(v.margin) + "\n";
    return s;
  }
  s += "scope,point,coords,sector,condition,status,margin,witness\n";
  for (const auto& p : r.points)
    for (const auto& c : p.conditions)
      s += "point," + std::to_string(p.index) + "," + join_semicolon(p.coords) + "," + c.sector +
           "," + c.condition + "," + c.status + "," + format_number(c.margin) + "," +
           join_semicolon(c.witness) + "\n";
  for (const auto& a : r.aggregate)
    s += "aggregate," + std::to_string(a.worst_point) + ",," + a.sector + "," + a.condition + "," +
         a.status + "," + format_number(a.margin) + "," + join_semicolon(a.witness) + "\n";
  return s;
}

void write_report(const Report& r, const std::string& path, const std::string& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open output file: " + path);
  out << (format == "csv" ? report_to_csv(r) : report_to_json(r));
  if (!out) fail(ErrorKind::io, "failed writing output file: " + path);
}

}  // namespace emtlab::scene
