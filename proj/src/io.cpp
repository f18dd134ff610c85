#include "matchsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matchsim/errors.hpp"

namespace matchsim {

std::string render_double(double value) {
  if (!std::isfinite(value)) {
    if (std::isnan(value)) return "\"nan\"";
    return value > 0 ? "\"inf\"" : "\"-inf\"";
  }
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::boolean;
  v.bool_ = b;
  return v;
}

JsonValue JsonValue::integer(std::int64_t i) {
  JsonValue v;
  v.kind_ = Kind::integer;
  v.int_ = i;
  return v;
}

JsonValue JsonValue::real(double d) {
  JsonValue v;
  v.kind_ = Kind::real;
  v.real_ = d;
  return v;
}

JsonValue JsonValue::string(std::string s) {
  JsonValue v;
  v.kind_ = Kind::string;
  v.string_ = std::move(s);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::array;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::object;
  return v;
}

JsonValue& JsonValue::push(JsonValue v) {
  items_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  fields_.emplace_back(key, std::move(v));
  return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void pad(std::string& out, int indent, int depth) {
  if (indent > 0) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
  }
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::null: out += "null"; break;
    case Kind::boolean: out += bool_ ? "true" : "false"; break;
    case Kind::integer: out += std::to_string(int_); break;
    case Kind::real: out += render_double(real_); break;
    case Kind::string: escape_into(out, string_); break;
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) out += ',';
        pad(out, indent, depth + 1);
        items_[i].write(out, indent, depth + 1);
      }
      pad(out, indent, depth);
      out += ']';
      break;
    }
    case Kind::object: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i > 0) out += ',';
        pad(out, indent, depth + 1);
        escape_into(out, fields_[i].first);
        out += indent > 0 ? ": " : ":";
        fields_[i].second.write(out, indent, depth + 1);
      }
      pad(out, indent, depth);
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  return out;
}

namespace {

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

CompatibilityGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ConfigError("graph file needs fields 'n' and 'edges'");
  const int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("each edge must be a 2-element array");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return CompatibilityGraph(n, std::move(edges));
}

}  // namespace

CompatibilityGraph load_graph(const std::string& spec) {
  if (spec == "paw" || spec.rfind("path:", 0) == 0 || spec.rfind("complete:", 0) == 0)
    return named_graph(spec);
  if (spec.rfind("er:", 0) == 0) {
    // er:<n>:<q>:<seed>
    std::istringstream in(spec.substr(3));
    std::string n_text, q_text, seed_text;
    if (!std::getline(in, n_text, ':') || !std::getline(in, q_text, ':') ||
        !std::getline(in, seed_text))
      throw ConfigError("expected er:<n>:<q>:<seed>, got '" + spec + "'");
    try {
      return random_connected_er(std::stoi(n_text), std::stod(q_text),
                                 std::stoull(seed_text));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad number in '" + spec + "'");
    }
  }
  return graph_from_json(parse_file(spec));
}

JsonValue graph_to_json(const CompatibilityGraph& g) {
  JsonValue edges = JsonValue::array();
  for (const auto& [i, j] : g.edges()) {
    JsonValue pair = JsonValue::array();
    pair.push(JsonValue::integer(i)).push(JsonValue::integer(j));
    edges.push(std::move(pair));
  }
  JsonValue out = JsonValue::object();
  out.set("n", JsonValue::integer(g.size()));
  out.set("edges", std::move(edges));
  return out;
}

ArrivalModel load_arrival_model(const std::string& path, int n) {
  const nlohmann::json j = parse_file(path);
  ArrivalModel model;
  if (j.contains("mu")) {
    model.mu = j.at("mu").get<std::vector<double>>();
  } else {
    model.mu.assign(static_cast<std::size_t>(n), 1.0 / n);
  }
  model.gamma = j.value("gamma", 0.0);
  if (!j.contains("patience")) throw ConfigError("arrival model needs a 'patience' field");
  const auto& pat = j.at("patience");
  if (pat.contains("deterministic")) {
    model.patience = PatienceLaw::deterministic(pat.at("deterministic").get<int>());
  } else if (pat.contains("discrete")) {
    std::vector<std::pair<double, double>> support;
    for (const auto& atom : pat.at("discrete")) {
      if (!atom.is_array() || atom.size() != 2)
        throw ConfigError("discrete patience atoms must be [value, prob] pairs");
      support.emplace_back(atom[0].get<double>(), atom[1].get<double>());
    }
    model.patience = PatienceLaw::discrete(std::move(support));
  } else {
    throw ConfigError("patience must be {\"deterministic\": p} or {\"discrete\": [[v,pr],...]}");
  }
  model.validate(n);
  return model;
}

JsonValue arrival_model_to_json(const ArrivalModel& model) {
  JsonValue mu = JsonValue::array();
  for (double m : model.mu) mu.push(JsonValue::real(m));
  JsonValue patience = JsonValue::object();
  if (model.patience.kind == PatienceLaw::Kind::deterministic) {
    patience.set("deterministic", JsonValue::integer(model.patience.word_length));
  } else {
    JsonValue support = JsonValue::array();
    for (const auto& [value, prob] : model.patience.support) {
      JsonValue atom = JsonValue::array();
      atom.push(JsonValue::real(value)).push(JsonValue::real(prob));
      support.push(std::move(atom));
    }
    patience.set("discrete", std::move(support));
  }
  JsonValue out = JsonValue::object();
  out.set("mu", std::move(mu));
  out.set("patience", std::move(patience));
  out.set("gamma", JsonValue::real(model.gamma));
  return out;
}

}  // namespace matchsim
