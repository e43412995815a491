#include "hosr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "hosr/errors.hpp"
#include "json.hpp"

namespace hosr {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot replace '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

EmbeddingFile read_embeddings_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  EmbeddingFileHeader header;
  std::vector<LabeledSample> samples;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);

    if (!have_header) {
      if (fields.size() < 3) {
        throw ParseError(source, line_no,
                         "header needs sample_id, a label column and at least one feature");
      }
      if (trim(fields[0]) != "sample_id") {
        throw ParseError(source, line_no, "first header column must be 'sample_id'");
      }
      for (const auto f : fields) {
        if (trim(f).empty()) throw ParseError(source, line_no, "empty header column name");
      }
      header.label_column = std::string(trim(fields[1]));
      header.dimension = fields.size() - 2;
      have_header = true;
      continue;
    }

    if (fields.size() != header.dimension + 2) {
      throw ParseError(source, line_no,
                       "row has " + std::to_string(fields.size()) + " columns, expected " +
                           std::to_string(header.dimension + 2));
    }
    LabeledSample s;
    s.sample_id = std::string(trim(fields[0]));
    s.class_label = std::string(trim(fields[1]));
    if (s.sample_id.empty()) throw ParseError(source, line_no, "empty sample_id");
    s.embedding.reserve(header.dimension);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      const auto f = trim(fields[i]);
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(source, line_no,
                         "feature " + std::to_string(i - 2) + " is not a number: '" +
                             std::string(f) + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(source, line_no,
                         "feature " + std::to_string(i - 2) + " is not finite");
      }
      s.embedding.push_back(v);
    }
    samples.push_back(std::move(s));
  }
  if (!have_header) throw ParseError(source, 0, "missing header row");
  header.sample_count = samples.size();
  try {
    return {header, Dataset(std::move(samples), header.dimension)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, 0, e.what());
  }
}

Dataset load_embeddings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_embeddings_csv(in, path.string()).dataset;
}

void write_embeddings_csv(std::ostream& out, const Dataset& dataset,
                          std::string_view label_column) {
  auto check_field = [](const std::string& f) {
    if (f.find_first_of(",\"\n\r") != std::string::npos) {
      throw std::invalid_argument("field '" + f + "' cannot be written to CSV unquoted");
    }
  };
  out << "sample_id," << label_column;
  for (std::size_t i = 0; i < dataset.dimension(); ++i) out << ",f" << i;
  out << '\n';
  for (const auto& s : dataset.samples()) {
    check_field(s.sample_id);
    check_field(s.class_label);
    out << s.sample_id << ',' << s.class_label;
    for (double v : s.embedding) out << ',' << format_real(v);
    out << '\n';
  }
}

void save_embeddings_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ostringstream ss;
  write_embeddings_csv(ss, dataset);
  write_text_file(path, ss.str());
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename F>
auto schema_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

void check_version(const json& j, std::string_view kind) {
  if (!j.is_object()) throw SchemaError("document is not a JSON object");
  if (!j.contains("schema_version")) throw SchemaError("missing schema_version");
  const int v = j.at("schema_version").get<int>();
  if (v != kSchemaVersion) {
    throw SchemaError("schema version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  if (j.value("kind", std::string()) != kind) {
    throw SchemaError("document kind is not '" + std::string(kind) + "'");
  }
}

json nodes_to_json(const Hierarchy& h) {
  json nodes = json::array();
  for (const auto& n : h.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    jn["children"] = n.children;
    jn["leaf_class"] = n.leaf_class ? json(*n.leaf_class) : json(nullptr);
    jn["member_classes"] = n.member_classes;
    jn["depth"] = n.depth;
    jn["merge_distance"] = n.merge_distance;
    nodes.push_back(std::move(jn));
  }
  return nodes;
}

Hierarchy hierarchy_from_json(const json& j) {
  const auto& jnodes = j.at("nodes");
  if (!jnodes.is_array() || jnodes.empty()) throw SchemaError("'nodes' must be a nonempty array");
  std::vector<HierarchyNode> nodes;
  for (const auto& jn : jnodes) {
    HierarchyNode n;
    n.id = jn.at("id").get<NodeId>();
    if (!jn.at("parent").is_null()) n.parent = jn.at("parent").get<NodeId>();
    n.children = jn.at("children").get<std::vector<NodeId>>();
    if (!jn.at("leaf_class").is_null()) n.leaf_class = jn.at("leaf_class").get<std::string>();
    n.member_classes = jn.at("member_classes").get<std::vector<std::string>>();
    n.depth = jn.at("depth").get<int>();
    n.merge_distance = jn.at("merge_distance").get<double>();
    nodes.push_back(std::move(n));
  }
  try {
    return Hierarchy::checked(std::move(nodes), j.at("root").get<NodeId>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

json models_to_json(const NodeModelSet& m) {
  json out;
  out["epsilon"] = m.epsilon;
  json stats = json::array();
  for (const auto& [id, s] : m.stats) {
    stats.push_back({{"node_id", s.node_id},
                     {"centroid", s.centroid},
                     {"mean_dist", s.mean_dist},
                     {"std_dist", s.std_dist},
                     {"train_count", s.train_count}});
  }
  json detectors = json::array();
  for (const auto& [id, d] : m.detectors) {
    detectors.push_back(
        {{"node_id", d.node_id}, {"threshold", d.threshold}, {"percentile", d.percentile}});
  }
  json classifiers = json::array();
  for (const auto& [id, c] : m.classifiers) {
    classifiers.push_back({{"parent_node_id", c.parent_node_id},
                           {"left_centroid", c.left_centroid},
                           {"right_centroid", c.right_centroid}});
  }
  out["stats"] = std::move(stats);
  out["detectors"] = std::move(detectors);
  out["classifiers"] = std::move(classifiers);
  return out;
}

NodeModelSet models_from_json(const json& j) {
  NodeModelSet m;
  m.epsilon = j.at("epsilon").get<double>();
  for (const auto& js : j.at("stats")) {
    NodeStats s;
    s.node_id = js.at("node_id").get<NodeId>();
    s.centroid = js.at("centroid").get<std::vector<double>>();
    s.mean_dist = js.at("mean_dist").get<double>();
    s.std_dist = js.at("std_dist").get<double>();
    s.train_count = js.at("train_count").get<std::size_t>();
    m.stats.emplace(s.node_id, std::move(s));
  }
  for (const auto& jd : j.at("detectors")) {
    OutlierDetector d;
    d.node_id = jd.at("node_id").get<NodeId>();
    d.threshold = jd.at("threshold").get<double>();
    d.percentile = jd.at("percentile").get<double>();
    m.detectors.emplace(d.node_id, d);
  }
  for (const auto& jc : j.at("classifiers")) {
    ChildClassifier c;
    c.parent_node_id = jc.at("parent_node_id").get<NodeId>();
    c.left_centroid = jc.at("left_centroid").get<std::vector<double>>();
    c.right_centroid = jc.at("right_centroid").get<std::vector<double>>();
    m.classifiers.emplace(c.parent_node_id, std::move(c));
  }
  return m;
}

void check_models(const NodeModelSet& m, const Hierarchy& h) {
  if (!(m.epsilon > 0.0)) throw SchemaError("node models: epsilon must be positive");
  if (!m.covers(h) || m.stats.size() != h.size() || m.detectors.size() != h.size()) {
    throw SchemaError("node models do not match the hierarchy's nodes");
  }
  const std::size_t dim = m.stats.at(h.root()).centroid.size();
  if (dim == 0) throw SchemaError("node models: empty centroid");
  for (const auto& [id, s] : m.stats) {
    if (s.centroid.size() != dim) throw SchemaError("node models: inconsistent dimension");
    if (s.train_count == 0 || s.mean_dist < 0.0 || s.std_dist < 0.0) {
      throw SchemaError("node models: invalid stats for node " + std::to_string(id));
    }
  }
  for (const auto& [id, d] : m.detectors) {
    if (d.threshold < 0.0 || !(d.percentile > 0.0 && d.percentile <= 100.0)) {
      throw SchemaError("node models: invalid detector for node " + std::to_string(id));
    }
  }
  for (const auto& [id, c] : m.classifiers) {
    const auto& node = h.node(id);
    if (node.is_leaf() || c.left_centroid.size() != dim || c.right_centroid.size() != dim) {
      throw SchemaError("node models: invalid classifier for node " + std::to_string(id));
    }
  }
}

json clustering_to_json(const ClusteringConfig& c) {
  return {{"distance_metric", std::string(to_string(c.distance_metric))},
          {"linkage", std::string(to_string(c.linkage))},
          {"relax_constraints_when_stuck", c.relax_constraints_when_stuck}};
}

ClusteringConfig clustering_from_json(const json& j) {
  ClusteringConfig c;
  c.distance_metric = parse_distance_metric(j.at("distance_metric").get<std::string>());
  c.linkage = parse_linkage(j.at("linkage").get<std::string>());
  c.relax_constraints_when_stuck = j.at("relax_constraints_when_stuck").get<bool>();
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constraints

ConstraintSet parse_constraints_json(std::string_view text) {
  const json j = parse_json(text);
  return schema_guard("constraints", [&] {
    if (!j.is_object()) throw SchemaError("constraints: document is not a JSON object");
    auto pairs = [&](const char* key) {
      std::vector<ClassPair> out;
      if (!j.contains(key)) return out;
      for (const auto& p : j.at(key)) {
        if (!p.is_array() || p.size() != 2) {
          throw SchemaError(std::string("constraints: '") + key + "' entries must be pairs");
        }
        out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
      }
      return out;
    };
    return ConstraintSet(pairs("cannot_link"), pairs("must_link"));
  });
}

ConstraintSet load_constraints(const std::filesystem::path& path) {
  return parse_constraints_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Model

std::string model_to_json(const ModelBundle& b) {
  const auto problems = validate_hierarchy(b.hierarchy);
  if (!problems.empty()) {
    throw std::invalid_argument("refusing to save invalid hierarchy: " + problems.front());
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "hosr.model";
  j["clustering"] = clustering_to_json(b.clustering);
  j["root"] = b.hierarchy.root();
  j["nodes"] = nodes_to_json(b.hierarchy);
  json log = json::array();
  for (const auto& m : b.merge_log) {
    log.push_back({{"left", m.left},
                   {"right", m.right},
                   {"merged", m.merged},
                   {"distance", m.distance},
                   {"kind", std::string(to_string(m.kind))}});
  }
  j["merge_log"] = std::move(log);
  j["warnings"] = b.warnings;
  j["node_models"] = b.models ? models_to_json(*b.models) : json(nullptr);
  return j.dump(2) + "\n";
}

ModelBundle model_from_json(std::string_view text) {
  const json j = parse_json(text);
  return schema_guard("model", [&] {
    check_version(j, "hosr.model");
    ModelBundle b;
    b.clustering = clustering_from_json(j.at("clustering"));
    b.hierarchy = hierarchy_from_json(j);
    for (const auto& jm : j.at("merge_log")) {
      MergeRecord m;
      m.left = jm.at("left").get<NodeId>();
      m.right = jm.at("right").get<NodeId>();
      m.merged = jm.at("merged").get<NodeId>();
      m.distance = jm.at("distance").get<double>();
      m.kind = parse_merge_kind(jm.at("kind").get<std::string>());
      if (!b.hierarchy.contains(m.merged) ||
          b.hierarchy.node(m.merged).children != std::vector<NodeId>{m.left, m.right}) {
        throw SchemaError("merge log entry for node " + std::to_string(m.merged) +
                          " does not match the hierarchy");
      }
      b.merge_log.push_back(m);
    }
    b.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (!j.at("node_models").is_null()) {
      b.models = models_from_json(j.at("node_models"));
      check_models(*b.models, b.hierarchy);
    }
    return b;
  });
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
  write_text_file(path, model_to_json(bundle));
}

ModelBundle load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_text_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string planted_tree_to_json(const PlantedTree& t) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "hosr.planted_tree";
  j["root"] = t.hierarchy.root();
  j["nodes"] = nodes_to_json(t.hierarchy);
  j["unseen_classes"] = t.unseen_classes;
  return j.dump(2) + "\n";
}

PlantedTree planted_tree_from_json(std::string_view text) {
  const json j = parse_json(text);
  return schema_guard("planted tree", [&] {
    check_version(j, "hosr.planted_tree");
    PlantedTree t;
    t.hierarchy = hierarchy_from_json(j);
    t.unseen_classes = j.at("unseen_classes").get<std::vector<std::string>>();
    for (const auto& u : t.unseen_classes) {
      if (!t.hierarchy.has_class(u)) throw SchemaError("unseen class '" + u + "' is not a leaf");
    }
    return t;
  });
}

void save_planted_tree(const std::filesystem::path& path, const PlantedTree& tree) {
  write_text_file(path, planted_tree_to_json(tree));
}

PlantedTree load_planted_tree(const std::filesystem::path& path) {
  return planted_tree_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// DOT / Newick

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string member_summary(const std::vector<ClassLabel>& members) {
  constexpr std::size_t kShown = 4;
  std::string out;
  for (std::size_t i = 0; i < members.size() && i < kShown; ++i) {
    if (i) out += ", ";
    out += members[i];
  }
  if (members.size() > kShown) out += ", ... (+" + std::to_string(members.size() - kShown) + ")";
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

}  // namespace

std::string export_dot(const Hierarchy& h, const std::map<NodeId, double>& heat) {
  const auto problems = validate_hierarchy(h);
  if (!problems.empty()) throw std::invalid_argument("export_dot: " + problems.front());
  std::ostringstream out;
  out << "digraph hierarchy {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (const auto& n : h.nodes()) {
    std::string label;
    std::string shape;
    if (n.is_leaf()) {
      label = *n.leaf_class;
      shape = "box";
    } else {
      label = "{" + member_summary(n.member_classes) + "}\\nd=" + fixed(n.merge_distance, 4);
      shape = "ellipse";
    }
    out << "  n" << n.id << " [label=\"" << dot_escape(label);
    const auto it = heat.find(n.id);
    if (it != heat.end()) {
      const double v = std::clamp(it->second, 0.0, 1.0);
      // White (0) to saturated red (1).
      const int lightness = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      char color[8];
      std::snprintf(color, sizeof(color), "#ff%02x%02x", lightness, lightness);
      out << "\\nCC=" << fixed(it->second, 3) << "\", style=filled, fillcolor=\"" << color;
    }
    out << "\", shape=" << shape << "];\n";
  }
  for (const auto& n : h.nodes()) {
    for (NodeId c : n.children) out << "  n" << n.id << " -> n" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

std::string newick_label(const std::string& s) {
  if (s.find_first_of(" ()[]':;,") == std::string::npos && !s.empty()) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

void newick_node(const Hierarchy& h, NodeId id, std::string& out) {
  const auto& n = h.node(id);
  if (n.is_leaf()) {
    out += newick_label(*n.leaf_class);
  } else {
    out += '(';
    newick_node(h, n.left(), out);
    out += ',';
    newick_node(h, n.right(), out);
    out += ')';
  }
  if (n.parent) {
    out += ':';
    out += format_real(h.node(*n.parent).merge_distance - n.merge_distance);
  }
}

}  // namespace

std::string export_newick(const Hierarchy& h) {
  const auto problems = validate_hierarchy(h);
  if (!problems.empty()) throw std::invalid_argument("export_newick: " + problems.front());
  std::string out;
  newick_node(h, h.root(), out);
  return out + ";\n";
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

namespace {

json real_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_real(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// JSON has no infinities; they travel as strings.
json threshold_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double threshold_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw SchemaError("bad threshold '" + s + "'");
  }
  return j.get<double>();
}

json summary_to_json(const DetectionSummary& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1},
          {"true_positive", s.counts.true_positive},
          {"false_positive", s.counts.false_positive},
          {"false_negative", s.counts.false_negative},
          {"true_negative", s.counts.true_negative}};
}

DetectionSummary summary_from_json(const json& j) {
  DetectionSummary s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.f1 = j.at("f1").get<double>();
  s.counts.true_positive = j.at("true_positive").get<std::size_t>();
  s.counts.false_positive = j.at("false_positive").get<std::size_t>();
  s.counts.false_negative = j.at("false_negative").get<std::size_t>();
  s.counts.true_negative = j.at("true_negative").get<std::size_t>();
  return s;
}

}  // namespace

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "hosr.report";
  j["mode"] = r.mode;
  j["sample_count"] = r.sample_count;
  j["known_count"] = r.known_count;
  j["unseen_count"] = r.unseen_count;
  j["auc_roc"] = real_or_null(r.auc_roc);
  j["leaf_decision"] = summary_to_json(r.leaf_decision);
  j["youden_decision"] = r.youden_decision ? summary_to_json(*r.youden_decision) : json(nullptr);
  j["youden_threshold"] = r.youden_threshold ? threshold_to_json(*r.youden_threshold)
                                             : json(nullptr);
  j["utility"] = real_or_null(r.utility);
  j["utility_literal"] = real_or_null(r.utility_literal);
  json per_class = json::object();
  for (const auto& [k, c] : r.per_class_ccc) {
    per_class[k] = {{"best_node", c.best_node}, {"ccc", c.ccc}};
  }
  j["per_class_ccc"] = std::move(per_class);
  j["mean_ccc"] = real_or_null(r.mean_ccc);
  json curve = json::array();
  for (const auto& p : r.roc_curve) {
    curve.push_back({{"threshold", threshold_to_json(p.threshold)}, {"tpr", p.tpr}, {"fpr", p.fpr}});
  }
  j["roc_curve"] = std::move(curve);
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(std::string_view text) {
  const json j = parse_json(text);
  return schema_guard("report", [&] {
    check_version(j, "hosr.report");
    MetricsReport r;
    r.mode = j.at("mode").get<std::string>();
    r.sample_count = j.at("sample_count").get<std::size_t>();
    r.known_count = j.at("known_count").get<std::size_t>();
    r.unseen_count = j.at("unseen_count").get<std::size_t>();
    r.auc_roc = optional_real(j.at("auc_roc"));
    r.leaf_decision = summary_from_json(j.at("leaf_decision"));
    if (!j.at("youden_decision").is_null()) {
      r.youden_decision = summary_from_json(j.at("youden_decision"));
    }
    if (!j.at("youden_threshold").is_null()) {
      r.youden_threshold = threshold_from_json(j.at("youden_threshold"));
    }
    r.utility = optional_real(j.at("utility"));
    r.utility_literal = optional_real(j.at("utility_literal"));
    for (const auto& [k, c] : j.at("per_class_ccc").items()) {
      r.per_class_ccc[k] = {c.at("best_node").get<NodeId>(), c.at("ccc").get<double>()};
    }
    r.mean_ccc = optional_real(j.at("mean_ccc"));
    for (const auto& p : j.at("roc_curve")) {
      r.roc_curve.push_back(
          {threshold_from_json(p.at("threshold")), p.at("tpr").get<double>(), p.at("fpr").get<double>()});
    }
    return r;
  });
}

std::string report_to_text(const MetricsReport& r) {
  std::ostringstream out;
  auto row = [&](std::string_view name, const std::string& value) {
    out << std::left << std::setw(22) << name << value << '\n';
  };
  auto real = [](const std::optional<double>& v) { return v ? fixed(*v, 6) : std::string("n/a"); };

  row("mode", r.mode);
  row("samples", std::to_string(r.sample_count));
  row("known_samples", std::to_string(r.known_count));
  row("unseen_samples", std::to_string(r.unseen_count));
  row("auc_roc", real(r.auc_roc));
  row("precision", fixed(r.leaf_decision.precision, 6));
  row("recall", fixed(r.leaf_decision.recall, 6));
  row("f1", fixed(r.leaf_decision.f1, 6));
  row("youden_threshold", real(r.youden_threshold));
  row("youden_precision", real(r.youden_decision ? std::optional(r.youden_decision->precision)
                                                 : std::nullopt));
  row("youden_recall",
      real(r.youden_decision ? std::optional(r.youden_decision->recall) : std::nullopt));
  row("youden_f1", real(r.youden_decision ? std::optional(r.youden_decision->f1) : std::nullopt));
  row("utility", real(r.utility));
  row("utility_literal", real(r.utility_literal));
  row("mean_ccc", real(r.mean_ccc));
  for (const auto& [k, c] : r.per_class_ccc) {
    row("ccc[" + k + "]", fixed(c.ccc, 6) + " @ node " + std::to_string(c.best_node));
  }
  return out.str();
}

void write_report(const MetricsReport& report, ReportFormat format,
                  const std::filesystem::path& path) {
  write_text_file(path, format == ReportFormat::json ? report_to_json(report)
                                                     : report_to_text(report));
}

void write_predictions_csv(std::ostream& out, std::span<const ClassificationResult> results,
                           const Hierarchy& h) {
  out << "sample_id,true_label,predicted_node,predicted_label,is_leaf,knownness,path\n";
  for (const auto& r : results) {
    const auto& node = h.node(r.predicted_node);
    out << r.sample_id << ',' << r.true_label.value_or("") << ',' << r.predicted_node << ','
        << node.leaf_class.value_or("") << ',' << (r.is_leaf_prediction ? 1 : 0) << ','
        << format_real(r.knownness_score) << ',';
    for (std::size_t i = 0; i < r.path.size(); ++i) out << (i ? "/" : "") << r.path[i];
    out << '\n';
  }
}

}  // namespace hosr
