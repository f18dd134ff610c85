#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "matchsim/graph.hpp"
#include "matchsim/tape.hpp"

namespace matchsim {

/// 17-significant-digit rendering used for every number the CLI emits
/// (JSON and CSV share it, so reruns are byte-identical).
std::string render_double(double value);

/// Minimal ordered JSON value for output files: insertion-ordered objects
/// and pinned number rendering. Inputs are parsed with nlohmann/json; this
/// type only exists so emitted bytes are a pure function of the data.
class JsonValue {
public:
  JsonValue() : kind_(Kind::null) {}
  static JsonValue boolean(bool b);
  static JsonValue integer(std::int64_t i);
  static JsonValue real(double d);
  static JsonValue string(std::string s);
  static JsonValue array();
  static JsonValue object();

  JsonValue& push(JsonValue v);                      // arrays
  JsonValue& set(const std::string& key, JsonValue v);  // objects

  std::string dump(int indent = 0) const;

private:
  enum class Kind { null, boolean, integer, real, string, array, object };

  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  double real_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
};

/// Graph from a named spec ("paw", "path:<n>", "complete:<n>",
/// "er:<n>:<q>:<seed>") or a JSON file ({"n": ..., "edges": [[i,j],...]}).
CompatibilityGraph load_graph(const std::string& spec);

/// Canonical JSON for a graph (the gen-graph output / graph file format).
JsonValue graph_to_json(const CompatibilityGraph& g);

/// Arrival model from the JSON config format: {"mu": [...], "patience":
/// {"deterministic": p} | {"discrete": [[value, prob], ...]}, "gamma": g}.
ArrivalModel load_arrival_model(const std::string& path, int n);

JsonValue arrival_model_to_json(const ArrivalModel& model);

}  // namespace matchsim
