#include "flipproc/json_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "flipproc/error.hpp"

namespace flipproc::io {

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InputError(std::string(what) + ": unknown field '" + key + "'");
  }
}

const Json& require(const Json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

std::uint64_t read_code(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw InputError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int read_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Rational read_rational(const Json& j, const char* what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError(std::string(what) + " must be an integer or an exact string such as \"1/3\"");
}

double read_real(const Json& j, const char* what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
  if (j.is_number()) return j.get<double>();
  throw InputError(std::string(what) + " must be a number");
}

}  // namespace

Rule rule_from_json(const Json& j, bool validate) {
  reject_unknown(j, {"order", "entries", "default"}, "rule");
  const int order = read_int(require(j, "order", "rule"), "order");
  if (auto it = j.find("default"); it != j.end() && *it != "identity") {
    throw InputError("rule: only \"identity\" is supported as the default row");
  }
  Rule rule(order);
  const Json& entries = require(j, "entries", "rule");
  if (!entries.is_array()) throw InputError("rule: entries must be an array");
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (const Json& e : entries) {
    reject_unknown(e, {"from", "to", "p"}, "rule entry");
    const std::uint64_t from = read_code(require(e, "from", "rule entry"), "from");
    const std::uint64_t to = read_code(require(e, "to", "rule entry"), "to");
    if (!seen.emplace(from, to).second) {
      throw InputError("rule: duplicate entry " + std::to_string(from) + " -> " + std::to_string(to));
    }
    rule.set(from, to, read_rational(require(e, "p", "rule entry"), "p"));
  }
  if (validate) rule.require_valid();
  return rule;
}

Json rule_to_json(const Rule& rule) {
  Json entries = Json::array();
  const Rule base = rule.normalized();
  for (const auto& [from, row] : base.explicit_rows()) {
    for (const auto& [to, p] : row) entries.push_back(Json{{"from", from}, {"to", to}, {"p", p.to_string()}});
  }
  return Json{{"order", rule.order()}, {"entries", std::move(entries)}, {"default", "identity"}};
}

StepKernel kernel_from_json(const Json& j) {
  reject_unknown(j, {"weights", "values"}, "kernel");
  const Json& jw = require(j, "weights", "kernel");
  const Json& jv = require(j, "values", "kernel");
  if (!jw.is_array() || !jv.is_array()) throw InputError("kernel: weights and values must be arrays");
  std::vector<double> weights;
  for (const Json& w : jw) weights.push_back(read_real(w, "weight"));
  std::vector<std::vector<double>> values;
  for (const Json& row : jv) {
    if (!row.is_array()) throw InputError("kernel: values must be a matrix");
    std::vector<double> r;
    for (const Json& v : row) r.push_back(read_real(v, "value"));
    values.push_back(std::move(r));
  }
  return StepKernel(std::move(weights), values);
}

Json kernel_to_json(const StepKernel& w) {
  Json weights = Json::array();
  for (double x : w.weights()) weights.push_back(x);
  Json values = Json::array();
  for (int i = 0; i < w.parts(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < w.parts(); ++k) row.push_back(w.value(i, k));
    values.push_back(std::move(row));
  }
  return Json{{"weights", std::move(weights)}, {"values", std::move(values)}};
}

graph::RootedGraph rooted_graph_from_json(const Json& j) {
  reject_unknown(j, {"vertices", "edges", "roots"}, "rooted graph");
  const Json& jv = require(j, "vertices", "rooted graph");
  if (!jv.is_array()) throw InputError("rooted graph: vertices must be an array");
  graph::RootedGraph g;
  auto name_of = [](const Json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer()) return std::to_string(x.get<long long>());
    throw InputError("rooted graph: vertex names must be strings or integers");
  };
  std::set<std::string> names;
  for (const Json& v : jv) {
    std::string name = name_of(v);
    if (!names.insert(name).second) throw InputError("rooted graph: duplicate vertex '" + name + "'");
    g.add_vertex(std::move(name));
  }
  if (auto it = j.find("edges"); it != j.end()) {
    if (!it->is_array()) throw InputError("rooted graph: edges must be an array");
    for (const Json& e : *it) {
      if (!e.is_array() || e.size() != 2) throw InputError("rooted graph: each edge is a pair");
      g.add_edge(g.vertex(name_of(e[0])), g.vertex(name_of(e[1])));
    }
  }
  if (auto it = j.find("roots"); it != j.end()) {
    if (!it->is_array()) throw InputError("rooted graph: roots must be an array");
    std::vector<int> roots;
    for (const Json& r : *it) roots.push_back(g.vertex(name_of(r)));
    g.set_roots(std::move(roots));
  }
  return g;
}

Json rooted_graph_to_json(const graph::RootedGraph& g) {
  Json vertices = Json::array();
  for (int v = 0; v < g.num_vertices(); ++v) vertices.push_back(g.name(v));
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back(Json::array({g.name(u), g.name(v)}));
  Json roots = Json::array();
  for (int r : g.roots()) roots.push_back(g.name(r));
  return Json{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}, {"roots", std::move(roots)}};
}

Json class_to_json(const graph::OrbitClass& cls) {
  return Json{{"code", cls.canon.graph.bits}, {"a", cls.canon.a + 1}, {"b", cls.canon.b + 1}};
}

Json certificate_to_json(const CoeffVector& v) {
  Json out = Json::array();
  for (const CoeffEntry& e : v.entries) {
    out.push_back(Json{{"class", class_to_json(e.cls)}, {"size", e.cls.size}, {"coeff", e.coeff.to_string()}});
  }
  return out;
}

Json verdict_to_json(const EquivalenceVerdict& v) {
  Json out{{"equivalent", v.equivalent}, {"order", v.order}};
  if (v.first_difference) {
    out["first_difference"] = class_to_json(*v.first_difference);
  } else {
    out["first_difference"] = nullptr;
  }
  out["left"] = certificate_to_json(v.left);
  out["right"] = certificate_to_json(v.right);
  return out;
}

Json uniqueness_to_json(const UniquenessVerdict& v) {
  Json out{{"unique", v.unique}, {"reason", to_string(v.reason)}};
  if (v.witness) {
    out["construction"] = v.construction;
    out["witness"] = rule_to_json(*v.witness);
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t";
  const int m = trajectory.states.empty() ? 0 : trajectory.states.front().parts();
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) out << ",w_" << i + 1 << "_" << j + 1;
  }
  out << "\n";
  for (std::size_t s = 0; s < trajectory.states.size(); ++s) {
    out << format_double(trajectory.times[s]);
    for (double v : trajectory.states[s].upper_triangle()) out << "," << format_double(v);
    out << "\n";
  }
}

void write_simulation_csv(std::ostream& out, const sim::SimResult& result) {
  out << "run,t,block_i,block_j,density,reference,abs_dev\n";
  for (const auto& s : result.samples) {
    out << s.run << "," << format_double(s.t) << "," << s.block_i + 1 << "," << s.block_j + 1 << ","
        << format_double(s.density) << "," << format_double(s.reference) << ","
        << format_double(std::abs(s.density - s.reference)) << "\n";
  }
}

Json transference_to_json(const sim::TransferenceReport& report) {
  Json runs = Json::array();
  for (std::size_t r = 0; r < report.result.max_deviation.size(); ++r) {
    runs.push_back(Json{{"run", r},
                        {"max_deviation", report.result.max_deviation[r]},
                        {"passed", static_cast<bool>(report.run_passed[r])}});
  }
  return Json{{"tolerance", report.tolerance},
              {"times", report.result.times},
              {"part_sizes", report.result.sizes},
              {"runs", std::move(runs)},
              {"runs_passed", report.runs_passed},
              {"passed", report.passed},
              {"note", "block-density proxy; tolerance is an empirical desk-scale choice"}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace flipproc::io
