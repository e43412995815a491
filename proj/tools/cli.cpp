#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hosr/hosr.hpp"
#include "json.hpp"

namespace hosr::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Lets a --config JSON document supply any long option of the active
// subcommand. Keys are option names without the leading dashes; values given
// on the command line take precedence.
class ConfigBinder {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    auto* opt = app->add_option("--" + name, var, help);
    bindings_[app][name] = {opt, [&var](const json& v) { assign(var, v); }};
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& name, bool& var,
                        const std::string& help) {
    auto* opt = app->add_flag("--" + name, var, help);
    bindings_[app][name] = {opt, [&var](const json& v) { var = v.get<bool>(); }};
    return opt;
  }

  void apply(CLI::App* app, const json& config) const {
    const auto it = bindings_.find(app);
    if (it == bindings_.end()) return;
    for (const auto& [key, value] : config.items()) {
      const auto b = it->second.find(key);
      if (b == it->second.end() || b->second.option->count() > 0) continue;
      try {
        b->second.set(value);
      } catch (const json::exception& e) {
        throw std::invalid_argument("config key '" + key + "': " + e.what());
      }
    }
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::function<void(const json&)> set;
  };

  template <typename T>
  static void assign(T& var, const json& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (v.is_string()) {
        var = v.get<std::string>();
      } else if (v.is_array()) {
        // Lists (e.g. unseen classes) are accepted as arrays.
        var.clear();
        for (const auto& e : v) {
          if (!var.empty()) var += ',';
          var += e.is_string() ? e.get<std::string>() : e.dump();
        }
      } else {
        var = v.dump();
      }
    } else {
      var = v.get<T>();
    }
  }

  std::map<const CLI::App*, std::map<std::string, Binding>> bindings_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  SynthOptions opts;
  std::string output;
  std::string truth;
};

void add_synth(CLI::App& app, ConfigBinder& cfg, SynthArgs& a) {
  auto* sub = app.add_subcommand("synth", "Generate labeled embeddings over a planted class tree");
  cfg.add(sub, "known", a.opts.known_classes, "Number of known classes")->capture_default_str();
  cfg.add(sub, "unseen", a.opts.unseen_classes, "Number of classes marked unseen")
      ->capture_default_str();
  cfg.add(sub, "dims", a.opts.dims, "Embedding dimension")->capture_default_str();
  cfg.add(sub, "samples", a.opts.samples_per_class, "Samples per class")->capture_default_str();
  cfg.add(sub, "step", a.opts.step, "Per-dimension std of a unit diffusion step")
      ->capture_default_str();
  cfg.add(sub, "noise", a.opts.noise_scale, "Per-dimension sample noise std")->capture_default_str();
  cfg.add(sub, "level-base", a.opts.level_base, "Base of the node time scale")
      ->capture_default_str();
  cfg.add(sub, "seed", a.opts.seed, "Random seed")->capture_default_str();
  cfg.add(sub, "output", a.output, "Embedding CSV to write");
  cfg.add(sub, "truth", a.truth, "Planted tree JSON (default: <output>.truth.json)");
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  if (a.output.empty()) throw std::invalid_argument("--output is required");
  const auto data = generate_synthetic(a.opts);
  save_embeddings_csv(a.output, data.dataset);
  const std::string truth = a.truth.empty() ? a.output + ".truth.json" : a.truth;
  save_planted_tree(truth, data.truth);
  out << "wrote " << data.dataset.size() << " samples over " << data.dataset.classes().size()
      << " classes to " << a.output << "; planted tree to " << truth << "\n";
  return 0;
}

// --- split -----------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string unseen;
  std::string truth;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string output;
  std::string train;
  std::string test;
};

void add_split(CLI::App& app, ConfigBinder& cfg, SplitArgs& a) {
  auto* sub = app.add_subcommand("split", "Hold out unseen classes and a share of known samples");
  cfg.add(sub, "input", a.input, "Embedding CSV");
  cfg.add(sub, "unseen", a.unseen, "Comma-separated unseen classes, or a count to draw");
  cfg.add(sub, "truth", a.truth, "Take the unseen classes from a planted tree written by synth");
  cfg.add(sub, "test-fraction", a.test_fraction, "Known-class share held out for testing")
      ->capture_default_str();
  cfg.add(sub, "seed", a.seed, "Random seed")->capture_default_str();
  cfg.add(sub, "output", a.output, "Output prefix: writes <prefix>.train.csv and <prefix>.test.csv");
  cfg.add(sub, "train", a.train, "Train CSV path (overrides the prefix)");
  cfg.add(sub, "test", a.test, "Test CSV path (overrides the prefix)");
}

int run_split(const SplitArgs& a, std::ostream& out) {
  if (a.input.empty()) throw std::invalid_argument("--input is required");
  if (a.unseen.empty() == a.truth.empty()) {
    throw std::invalid_argument("exactly one of --unseen and --truth is required");
  }
  const std::string train_path = !a.train.empty() ? a.train : a.output + ".train.csv";
  const std::string test_path = !a.test.empty() ? a.test : a.output + ".test.csv";
  if ((a.train.empty() || a.test.empty()) && a.output.empty()) {
    throw std::invalid_argument("--output (or both --train and --test) is required");
  }
  SplitOptions opts;
  if (!a.truth.empty()) {
    opts.unseen_classes = load_planted_tree(a.truth).unseen_classes;
  } else if (is_count(a.unseen)) {
    opts.unseen_count = std::stoul(a.unseen);
  } else {
    opts.unseen_classes = split_list(a.unseen);
  }
  opts.known_test_fraction = a.test_fraction;
  opts.seed = a.seed;
  const auto split = split_open_set(load_embeddings_csv(a.input), opts);
  save_embeddings_csv(train_path, split.train);
  save_embeddings_csv(test_path, split.test);
  out << "train: " << split.train.size() << " samples, " << split.train.classes().size()
      << " classes -> " << train_path << "\n";
  out << "test: " << split.test.size() << " samples -> " << test_path << "\n";
  out << "unseen:";
  for (const auto& u : split.unseen_classes) out << ' ' << u;
  out << "\n";
  return 0;
}

// --- build -----------------------------------------------------------------

struct BuildArgs {
  std::string input;
  std::string constraints;
  std::string metric = "euclidean";
  std::string linkage = "average";
  bool no_relax = false;
  std::string output;
};

void add_build(CLI::App& app, ConfigBinder& cfg, BuildArgs& a) {
  auto* sub = app.add_subcommand("build", "Build the class hierarchy from training embeddings");
  cfg.add(sub, "input", a.input, "Training embedding CSV");
  cfg.add(sub, "constraints", a.constraints, "Constraint JSON (cannot_link / must_link)");
  cfg.add(sub, "metric", a.metric, "euclidean | cosine")->capture_default_str();
  cfg.add(sub, "linkage", a.linkage, "single | complete | average")->capture_default_str();
  cfg.add_flag(sub, "no-relax", a.no_relax, "Fail instead of relaxing unsatisfiable cannot-links");
  cfg.add(sub, "output", a.output, "Model JSON to write");
}

int run_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  if (a.input.empty() || a.output.empty()) {
    throw std::invalid_argument("--input and --output are required");
  }
  ClusteringConfig config;
  config.distance_metric = parse_distance_metric(a.metric);
  config.linkage = parse_linkage(a.linkage);
  config.relax_constraints_when_stuck = !a.no_relax;
  const ConstraintSet constraints = a.constraints.empty() ? ConstraintSet{} : load_constraints(a.constraints);
  const auto bundle = build_model(load_embeddings_csv(a.input), constraints, config);
  for (const auto& w : bundle.warnings) err << "warning: " << w << "\n";
  save_model(a.output, bundle);
  out << "hierarchy with " << bundle.hierarchy.leaf_count() << " classes, "
      << bundle.hierarchy.size() << " nodes -> " << a.output << "\n";
  return 0;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string model;
  double percentile = kDefaultPercentile;
  std::string output;
};

void add_train(CLI::App& app, ConfigBinder& cfg, TrainArgs& a) {
  auto* sub = app.add_subcommand("train", "Fit per-node statistics, detectors and classifiers");
  cfg.add(sub, "input", a.input, "Training embedding CSV");
  cfg.add(sub, "model", a.model, "Model JSON produced by build");
  cfg.add(sub, "percentile", a.percentile, "Outlier threshold percentile in (0, 100]")
      ->capture_default_str();
  cfg.add(sub, "output", a.output, "Model JSON to write (default: overwrite --model)");
}

int run_train(const TrainArgs& a, std::ostream& out) {
  if (a.input.empty() || a.model.empty()) throw std::invalid_argument("--input and --model are required");
  auto bundle = load_model(a.model);
  train_model(bundle, load_embeddings_csv(a.input), a.percentile);
  const std::string dest = a.output.empty() ? a.model : a.output;
  save_model(dest, bundle);
  out << "trained " << bundle.hierarchy.size() << " node models -> " << dest << "\n";
  return 0;
}

// --- classify / eval -------------------------------------------------------

struct ClassifyArgs {
  std::string input;
  std::string model;
  std::string mode = "score";
  double depth_bonus = 0.0;
  std::string output;
};

void add_classifier_options(CLI::App* sub, ConfigBinder& cfg, ClassifyArgs& a) {
  cfg.add(sub, "input", a.input, "Embedding CSV to classify");
  cfg.add(sub, "model", a.model, "Trained model JSON");
  cfg.add(sub, "mode", a.mode, "score | traversal")->capture_default_str();
  cfg.add(sub, "depth-bonus", a.depth_bonus, "Score bonus per level of depth (score mode)")
      ->capture_default_str();
}

ClassifierConfig classifier_config(const ClassifyArgs& a) {
  ClassifierConfig c;
  c.mode = parse_classifier_mode(a.mode);
  c.depth_bonus = a.depth_bonus;
  return c;
}

ModelBundle load_trained(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("--model is required");
  auto bundle = load_model(path);
  if (!bundle.models) throw InvalidStateError(path + ": model is not trained; run 'hosr train' first");
  return bundle;
}

void add_classify(CLI::App& app, ConfigBinder& cfg, ClassifyArgs& a) {
  auto* sub = app.add_subcommand("classify", "Assign samples to hierarchy nodes");
  add_classifier_options(sub, cfg, a);
  cfg.add(sub, "output", a.output, "Predictions CSV (default: stdout)");
}

int run_classify(const ClassifyArgs& a, std::ostream& out) {
  if (a.input.empty()) throw std::invalid_argument("--input is required");
  const auto bundle = load_trained(a.model);
  const auto data = load_embeddings_csv(a.input);
  const auto results = classify_batch(data.samples(), bundle.hierarchy, *bundle.models,
                                      classifier_config(a));
  std::ostringstream csv;
  write_predictions_csv(csv, results, bundle.hierarchy);
  write_output(a.output, csv.str(), out);
  return 0;
}

struct EvalArgs {
  ClassifyArgs base;
  std::string format = "json";
  std::string predictions;
};

void add_eval(CLI::App& app, ConfigBinder& cfg, EvalArgs& a) {
  auto* sub = app.add_subcommand("eval", "Classify labeled test data and report metrics");
  add_classifier_options(sub, cfg, a.base);
  cfg.add(sub, "output", a.base.output, "Report path (default: stdout)");
  cfg.add(sub, "format", a.format, "json | text")->capture_default_str();
  cfg.add(sub, "predictions", a.predictions, "Also write per-sample predictions CSV here");
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  if (a.base.input.empty()) throw std::invalid_argument("--input is required");
  const auto format = parse_report_format(a.format);
  const auto bundle = load_trained(a.base.model);
  const auto ev = evaluate_model(bundle, load_embeddings_csv(a.base.input), classifier_config(a.base));
  if (!a.predictions.empty()) {
    std::ostringstream csv;
    write_predictions_csv(csv, ev.results, bundle.hierarchy);
    write_text_file(a.predictions, csv.str());
  }
  write_output(a.base.output,
               format == ReportFormat::json ? report_to_json(ev.report) : report_to_text(ev.report),
               out);
  return 0;
}

// --- export ----------------------------------------------------------------

struct ExportArgs {
  std::string model;
  std::string format = "dot";
  std::string output;
  std::string heat_class;
  ClassifyArgs heat;
};

void add_export(CLI::App& app, ConfigBinder& cfg, ExportArgs& a) {
  auto* sub = app.add_subcommand("export", "Write the hierarchy as DOT or Newick");
  cfg.add(sub, "model", a.model, "Model JSON");
  cfg.add(sub, "format", a.format, "dot | newick")->capture_default_str();
  cfg.add(sub, "output", a.output, "Output path (default: stdout)");
  cfg.add(sub, "heat-class", a.heat_class,
          "DOT only: shade nodes by concentration centrality of this class's predictions");
  cfg.add(sub, "input", a.heat.input, "Labeled CSV classified for --heat-class");
  cfg.add(sub, "mode", a.heat.mode, "score | traversal (for --heat-class)")->capture_default_str();
  cfg.add(sub, "depth-bonus", a.heat.depth_bonus, "Score bonus per level (for --heat-class)")
      ->capture_default_str();
}

int run_export(const ExportArgs& a, std::ostream& out) {
  if (a.model.empty()) throw std::invalid_argument("--model is required");
  const auto bundle = load_model(a.model);
  std::string text;
  if (a.format == "newick") {
    text = export_newick(bundle.hierarchy);
  } else if (a.format == "dot") {
    std::map<NodeId, double> heat;
    if (!a.heat_class.empty()) {
      if (a.heat.input.empty()) throw std::invalid_argument("--heat-class needs --input");
      if (!bundle.models) throw InvalidStateError("--heat-class needs a trained model");
      const auto data = load_embeddings_csv(a.heat.input);
      const auto results = classify_batch(data.samples(), bundle.hierarchy, *bundle.models,
                                          classifier_config(a.heat));
      const auto dist = assignment_distribution(results, a.heat_class);
      const TreeDistances d(bundle.hierarchy);
      for (const auto& n : bundle.hierarchy.nodes()) {
        heat[n.id] = concentration_centrality(static_cast<std::size_t>(n.id), dist, d);
      }
    }
    text = export_dot(bundle.hierarchy, heat);
  } else {
    throw std::invalid_argument("unknown export format '" + a.format + "'");
  }
  write_output(a.output, text, out);
  return 0;
}

// Finds --config before CLI11 parsing so its values can seed the options.
std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical open-set recognition over class embeddings", "hosr"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file whose keys mirror the long flags")
      ->trigger_on_parse();

  ConfigBinder cfg;
  SynthArgs synth;
  SplitArgs split;
  BuildArgs build;
  TrainArgs train;
  ClassifyArgs classify;
  EvalArgs eval;
  ExportArgs exp;
  add_synth(app, cfg, synth);
  add_split(app, cfg, split);
  add_build(app, cfg, build);
  add_train(app, cfg, train);
  add_classify(app, cfg, classify);
  add_eval(app, cfg, eval);
  add_export(app, cfg, exp);
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv{"hosr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (const auto path = find_config_path(args)) {
      json config;
      try {
        config = json::parse(read_text_file(*path));
      } catch (const json::exception& e) {
        throw std::invalid_argument("config '" + *path + "': " + e.what());
      }
      if (!config.is_object()) throw std::invalid_argument("config '" + *path + "' is not an object");
      cfg.apply(sub, config);
    }
    if (name == "synth") return run_synth(synth, out);
    if (name == "split") return run_split(split, out);
    if (name == "build") return run_build(build, out, err);
    if (name == "train") return run_train(train, out);
    if (name == "classify") return run_classify(classify, out);
    if (name == "eval") return run_eval(eval, out);
    if (name == "export") return run_export(exp, out);
    err << "hosr: unknown command '" << name << "'\n";
    return 2;
  } catch (const std::exception& e) {
    err << "hosr " << name << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hosr::cli
