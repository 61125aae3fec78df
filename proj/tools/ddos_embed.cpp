// Copyright 2026 The ddos-embed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ddos-embed: train embeddings, run link-prediction sweeps and check
// gradients from the command line.
//
// Exit codes: 0 success, 1 usage/parse/config/IO error, 2 numerical abort
// during training, 3 gradient check failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ddos/ddos.h"
#include "json.hpp"
#include "run_files.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using ddos_tool::ToolError;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitGradCheck = 3;

// Carries a ddos_status out of nested helpers.
class ApiError : public std::runtime_error {
 public:
  ApiError(ddos_status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  ddos_status status() const { return status_; }

 private:
  ddos_status status_;
};

void Check(ddos_status status, const std::string& context) {
  if (status == DDOS_OK) return;
  std::string message = context;
  const char* detail = ddos_last_error();
  message += ": ";
  message += (detail != nullptr && *detail != '\0') ? detail
                                                    : ddos_status_string(status);
  throw ApiError(status, message);
}

struct GraphDeleter {
  void operator()(ddos_graph* g) const { ddos_graph_destroy(g); }
};
struct ModelDeleter {
  void operator()(ddos_model* m) const { ddos_model_destroy(m); }
};
struct EvalDeleter {
  void operator()(ddos_eval* e) const { ddos_eval_destroy(e); }
};
using GraphPtr = std::unique_ptr<ddos_graph, GraphDeleter>;
using ModelPtr = std::unique_ptr<ddos_model, ModelDeleter>;
using EvalPtr = std::unique_ptr<ddos_eval, EvalDeleter>;

// Flags shared by train and linkpred. String-valued so that they go through
// the same typed parser as config files.
struct TrainFlags {
  std::string graph;
  std::string config;
  std::vector<int> dims;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> nb, encoder, order, epochs, lr, neg_ratio,
      pos_batch, init_scale, freeze_intercept;
  std::string out;
  std::string curve;
  std::string manifest;
};

void AddTrainFlags(CLI::App* cmd, TrainFlags& f, bool multi_dim) {
  cmd->add_option("--graph", f.graph, "Edge-list file")->required();
  cmd->add_option("--config", f.config, "key = value configuration file");
  if (multi_dim) {
    cmd->add_option("--d", f.dims, "Embedding dimension(s), comma separated")
        ->delimiter(',');
  } else {
    cmd->add_option("--d", f.dims, "Embedding dimension")->expected(1);
  }
  cmd->add_option("--nb", f.nb, "Histogram bins");
  cmd->add_option("--encoder", f.encoder, "lookup or linear");
  cmd->add_option("--order", f.order, "Similarity order (1 or 2)");
  cmd->add_option("--epochs", f.epochs, "Training epochs");
  cmd->add_option("--lr", f.lr, "SGD learning rate");
  cmd->add_option("--neg-ratio", f.neg_ratio, "Negatives per positive");
  cmd->add_option("--pos-batch", f.pos_batch, "Positive pairs per step");
  cmd->add_option("--init-scale", f.init_scale, "Std. dev. of initial weights");
  cmd->add_option("--freeze-intercept", f.freeze_intercept,
                  "Keep the linear encoder bias at 0 (true/false)");
  cmd->add_option("--seed", f.seeds, "Seed(s), comma separated")->delimiter(',');
  cmd->add_option("--curve", f.curve, "Loss-curve CSV path");
  cmd->add_option("--manifest", f.manifest, "Manifest path");
}

void SetKey(ddos_train_config& cfg, const char* key,
            const std::optional<std::string>& value) {
  if (!value) return;
  Check(ddos_train_config_set(&cfg, key, value->c_str()),
        std::string("--") + key);
}

enum class SeedSource { kFlag, kConfig, kEntropy };

const char* ToString(SeedSource s) {
  switch (s) {
    case SeedSource::kFlag: return "flag";
    case SeedSource::kConfig: return "config";
    case SeedSource::kEntropy: return "entropy";
  }
  return "unknown";
}

struct ResolvedConfig {
  ddos_train_config cfg;
  std::vector<std::uint64_t> seeds;
  SeedSource seed_source = SeedSource::kFlag;
};

std::uint64_t EntropySeed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Defaults, then the config file, then flags.
ResolvedConfig ResolveConfig(const TrainFlags& f) {
  ResolvedConfig r;
  ddos_train_config_default(&r.cfg);
  bool config_has_seed = false;
  if (!f.config.empty()) {
    // The file sets the seed iff loading it onto two different seeds agrees.
    ddos_train_config probe = r.cfg;
    probe.seed = r.cfg.seed + 1;
    Check(ddos_train_config_load(f.config.c_str(), &r.cfg), f.config);
    Check(ddos_train_config_load(f.config.c_str(), &probe), f.config);
    config_has_seed = probe.seed == r.cfg.seed;
  }
  SetKey(r.cfg, "nb", f.nb);
  SetKey(r.cfg, "encoder", f.encoder);
  SetKey(r.cfg, "order", f.order);
  SetKey(r.cfg, "epochs", f.epochs);
  SetKey(r.cfg, "lr", f.lr);
  SetKey(r.cfg, "neg_ratio", f.neg_ratio);
  SetKey(r.cfg, "pos_batch", f.pos_batch);
  SetKey(r.cfg, "init_scale", f.init_scale);
  SetKey(r.cfg, "freeze_intercept", f.freeze_intercept);

  if (!f.seeds.empty()) {
    r.seeds = f.seeds;
    r.seed_source = SeedSource::kFlag;
  } else if (config_has_seed) {
    r.seeds = {r.cfg.seed};
    r.seed_source = SeedSource::kConfig;
  } else {
    r.seeds = {EntropySeed()};
    r.seed_source = SeedSource::kEntropy;
    std::cerr << "no seed given; using " << r.seeds.front() << "\n";
  }
  r.cfg.seed = r.seeds.front();
  return r;
}

ordered_json ConfigJson(const ddos_train_config& c) {
  ordered_json j;
  j["d"] = c.dim;
  j["nb"] = c.num_bins;
  j["encoder"] = c.encoder == DDOS_ENCODER_LOOKUP ? "lookup" : "linear";
  j["order"] = c.similarity_order;
  j["epochs"] = c.epochs;
  j["lr"] = c.learning_rate;
  j["neg_ratio"] = c.neg_ratio;
  j["pos_batch"] = c.pos_batch;
  j["seed"] = c.seed;
  j["freeze_intercept"] = c.freeze_intercept != 0;
  j["init_scale"] = c.init_scale;
  return j;
}

GraphPtr LoadGraph(const std::string& path) {
  if (!fs::exists(path)) throw ToolError("graph file not found: " + path);
  ddos_graph* raw = nullptr;
  size_t loops = 0;
  size_t dups = 0;
  Check(ddos_graph_load_file(path.c_str(), &raw, &loops, &dups), path);
  GraphPtr g(raw);
  if (loops > 0 || dups > 0) {
    std::cerr << path << ": dropped " << loops << " self-loop(s) and " << dups
              << " duplicate edge(s)\n";
  }
  return g;
}

std::string GraphStem(const std::string& path) {
  return fs::path(path).stem().string();
}

// Output path for one run when several runs share a --curve argument.
fs::path PerRunPath(const fs::path& base, bool single, int dim,
                    std::uint64_t seed) {
  if (single) return base;
  fs::path p = base;
  p.replace_filename(base.stem().string() + "_d" + std::to_string(dim) +
                     "_seed" + std::to_string(seed) + base.extension().string());
  return p;
}

// 1e-4 rather than 0.0001.
std::string FormatTolerance(double v) {
  std::ostringstream out;
  out << std::scientific;
  out.precision(0);
  out << v;
  std::string s = out.str();
  const size_t e = s.find('e');
  if (e != std::string::npos) {
    size_t digits = e + 2;
    while (digits + 1 < s.size() && s[digits] == '0') s.erase(digits, 1);
    if (s[e + 1] == '+') s.erase(e + 1, 1);
  }
  return s;
}

std::string FormatReal(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// ---- train -----------------------------------------------------------------

int RunTrain(const TrainFlags& f) {
  if (f.dims.size() > 1) throw ToolError("train takes a single --d");
  if (f.seeds.size() > 1) throw ToolError("train takes a single --seed");
  GraphPtr graph = LoadGraph(f.graph);
  ResolvedConfig rc = ResolveConfig(f);
  if (!f.dims.empty()) rc.cfg.dim = f.dims.front();
  Check(ddos_train_config_validate(&rc.cfg), "config");

  ddos_tool::RunManifest manifest;
  manifest.command = "train";
  manifest.tool_version = ddos_version();
  manifest.config = ConfigJson(rc.cfg);
  manifest.input = f.graph;
  manifest.input_digest = ddos_tool::DigestFile(f.graph);
  manifest.outputs.push_back(f.out);
  if (!f.curve.empty()) manifest.outputs.push_back(f.curve);
  manifest.seeds = rc.seeds;
  manifest.seed_source = ToString(rc.seed_source);
  const fs::path manifest_path =
      f.manifest.empty() ? fs::path(f.out + ".manifest.json") : fs::path(f.manifest);
  ddos_tool::WriteAtomically(manifest_path, manifest.ToJson().dump(2) + "\n");

  ddos_model* raw = nullptr;
  Check(ddos_train(graph.get(), &rc.cfg, &raw), "training");
  ModelPtr model(raw);
  Check(ddos_model_write_embeddings(model.get(), f.out.c_str()), f.out);
  if (!f.curve.empty()) {
    Check(ddos_model_write_curve(model.get(), f.curve.c_str()), f.curve);
  }

  const size_t steps = ddos_model_curve_length(model.get());
  std::vector<double> losses(steps);
  Check(ddos_model_curve(model.get(), nullptr, losses.data(), steps), "curve");
  std::cout << "nodes " << ddos_model_num_nodes(model.get()) << " d "
            << ddos_model_dim(model.get()) << " steps " << steps
            << " first_loss " << FormatReal(losses.front()) << " last_loss "
            << FormatReal(losses.back()) << "\n";
  return kExitOk;
}

// ---- linkpred --------------------------------------------------------------

struct LinkPredFlags {
  TrainFlags train;
  std::string name;
  std::string features = "concat";
  unsigned jobs = 1;
};

struct RunSpec {
  int dim;
  std::uint64_t seed;
};

struct RunResult {
  RunSpec spec;
  double auc = 0.0;
  double train_auc = 0.0;
  double wall_seconds = 0.0;
  size_t train_edges = 0;
  size_t test_edges = 0;
  bool logreg_converged = false;
  std::vector<int64_t> steps;
  std::vector<double> losses;
};

RunResult RunOne(const ddos_graph* graph, ddos_train_config cfg,
                 ddos_pair_features features, const RunSpec& spec,
                 const std::string& curve_path) {
  cfg.dim = spec.dim;
  cfg.seed = spec.seed;
  ddos_eval* raw = nullptr;
  Check(ddos_link_prediction(graph, &cfg, features, spec.seed, &raw),
        "link prediction (d=" + std::to_string(spec.dim) +
            ", seed=" + std::to_string(spec.seed) + ")");
  EvalPtr eval(raw);
  RunResult r;
  r.spec = spec;
  r.auc = ddos_eval_auc(eval.get());
  r.train_auc = ddos_eval_train_auc(eval.get());
  r.wall_seconds = ddos_eval_wall_seconds(eval.get());
  r.train_edges = ddos_eval_train_edges(eval.get());
  r.test_edges = ddos_eval_test_edges(eval.get());
  r.logreg_converged = ddos_eval_logreg_converged(eval.get()) != 0;
  const size_t n = ddos_eval_curve_length(eval.get());
  r.steps.resize(n);
  r.losses.resize(n);
  Check(ddos_eval_curve(eval.get(), r.steps.data(), r.losses.data(), n), "curve");
  if (!curve_path.empty()) {
    Check(ddos_eval_write_curve(eval.get(), curve_path.c_str()), curve_path);
  }
  return r;
}

ordered_json RunJson(const std::string& dataset, const RunResult& r,
                     const ddos_train_config& base, const std::string& features) {
  ddos_train_config cfg = base;
  cfg.dim = r.spec.dim;
  cfg.seed = r.spec.seed;
  ordered_json j;
  j["dataset"] = dataset;
  j["d"] = r.spec.dim;
  j["seed"] = r.spec.seed;
  j["auc"] = r.auc;
  j["train_auc"] = r.train_auc;
  j["wall_s"] = r.wall_seconds;
  j["train_edges"] = r.train_edges;
  j["test_edges"] = r.test_edges;
  j["logreg_converged"] = r.logreg_converged;
  j["features"] = features;
  j["config"] = ConfigJson(cfg);
  j["loss_curve"] = {{"step", r.steps}, {"loss", r.losses}};
  return j;
}

int RunLinkPred(const LinkPredFlags& f) {
  if (f.train.out.empty()) throw ToolError("linkpred needs --out DIR");
  ddos_pair_features features;
  if (f.features == "concat") {
    features = DDOS_PAIR_CONCAT;
  } else if (f.features == "hadamard") {
    features = DDOS_PAIR_HADAMARD;
  } else {
    throw ToolError("--features must be concat or hadamard");
  }
  GraphPtr graph = LoadGraph(f.train.graph);
  ResolvedConfig rc = ResolveConfig(f.train);
  std::vector<int> dims = f.train.dims;
  if (dims.empty()) dims = {rc.cfg.dim};
  for (int d : dims) {
    ddos_train_config probe = rc.cfg;
    probe.dim = d;
    Check(ddos_train_config_validate(&probe), "config (d=" + std::to_string(d) + ")");
  }
  const std::string dataset = f.name.empty() ? GraphStem(f.train.graph) : f.name;

  std::vector<RunSpec> specs;
  for (int d : dims) {
    for (std::uint64_t s : rc.seeds) specs.push_back({d, s});
  }
  const fs::path out_dir = f.train.out;
  const bool single = specs.size() == 1;
  auto run_json_path = [&](const RunSpec& s) {
    return out_dir / "runs" /
           (dataset + "_d" + std::to_string(s.dim) + "_seed" +
            std::to_string(s.seed) + ".json");
  };
  auto curve_path = [&](const RunSpec& s) -> std::string {
    if (f.train.curve.empty()) return {};
    return PerRunPath(f.train.curve, single, s.dim, s.seed).string();
  };

  ddos_tool::RunManifest manifest;
  manifest.command = "linkpred";
  manifest.tool_version = ddos_version();
  manifest.config = ConfigJson(rc.cfg);
  manifest.config["d"] = dims;
  manifest.config["features"] = f.features;
  manifest.input = f.train.graph;
  manifest.input_digest = ddos_tool::DigestFile(f.train.graph);
  for (const RunSpec& s : specs) {
    manifest.outputs.push_back(run_json_path(s));
    if (!f.train.curve.empty()) manifest.outputs.push_back(curve_path(s));
  }
  manifest.outputs.push_back(out_dir / "aggregate.csv");
  manifest.outputs.push_back(out_dir / "summary.csv");
  manifest.seeds = rc.seeds;
  manifest.seed_source = ToString(rc.seed_source);
  const fs::path manifest_path = f.train.manifest.empty()
                                     ? out_dir / "manifest.json"
                                     : fs::path(f.train.manifest);
  ddos_tool::WriteAtomically(manifest_path, manifest.ToJson().dump(2) + "\n");

  // Runs are independent; workers pull the next index.
  std::vector<std::optional<RunResult>> results(specs.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::optional<ApiError> api_error;
  std::string other_error;
  auto worker = [&] {
    for (size_t k = next++; k < specs.size(); k = next++) {
      try {
        RunResult r = RunOne(graph.get(), rc.cfg, features, specs[k], curve_path(specs[k]));
        ddos_tool::WriteAtomically(run_json_path(specs[k]),
                                   RunJson(dataset, r, rc.cfg, f.features).dump(2) + "\n");
        std::lock_guard<std::mutex> lock(error_mutex);
        std::cerr << "finished " << dataset << " d=" << r.spec.dim
                  << " seed=" << r.spec.seed << "\n";
        results[k] = std::move(r);
      } catch (const ApiError& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!api_error && other_error.empty()) api_error = e;
        next = specs.size();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!api_error && other_error.empty()) other_error = e.what();
        next = specs.size();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(f.jobs, static_cast<unsigned>(specs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (api_error) throw *api_error;
  if (!other_error.empty()) throw ToolError(other_error);

  std::ostringstream aggregate;
  aggregate << "dataset,d,seed,auc,wall_s\n";
  std::map<int, std::vector<const RunResult*>> by_dim;
  for (const auto& r : results) {
    aggregate << dataset << ',' << r->spec.dim << ',' << r->spec.seed << ','
              << FormatReal(r->auc) << ',' << FormatReal(r->wall_seconds) << '\n';
    by_dim[r->spec.dim].push_back(&*r);
  }
  ddos_tool::WriteAtomically(out_dir / "aggregate.csv", aggregate.str());

  std::ostringstream summary;
  summary << "dataset,d,runs,auc_mean,auc_std,wall_s_mean\n";
  for (int d : dims) {
    const auto& runs = by_dim[d];
    if (runs.empty()) continue;
    const double n = static_cast<double>(runs.size());
    double mean = 0.0;
    double wall = 0.0;
    for (const RunResult* r : runs) {
      mean += r->auc / n;
      wall += r->wall_seconds / n;
    }
    double var = 0.0;
    for (const RunResult* r : runs) var += (r->auc - mean) * (r->auc - mean);
    const double sd = runs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    summary << dataset << ',' << d << ',' << runs.size() << ','
            << FormatReal(mean) << ',' << FormatReal(sd) << ','
            << FormatReal(wall) << '\n';
    by_dim.erase(d);
  }
  ddos_tool::WriteAtomically(out_dir / "summary.csv", summary.str());
  std::cout << summary.str();
  return kExitOk;
}

// ---- gradcheck -------------------------------------------------------------

struct GradCheckFlags {
  std::vector<int> bins;
  int dim = 0;
  unsigned nodes = 0;
  int configurations = 0;
  std::optional<std::uint64_t> seed;
  bool flip_sign = false;
};

int RunGradCheck(const GradCheckFlags& f) {
  ddos_gradcheck_options options;
  ddos_gradcheck_options_default(&options);
  if (!f.bins.empty()) {
    if (f.bins.size() > DDOS_GRADCHECK_MAX_BIN_COUNTS) {
      throw ToolError("at most " + std::to_string(DDOS_GRADCHECK_MAX_BIN_COUNTS) +
                      " bin counts");
    }
    std::copy(f.bins.begin(), f.bins.end(), options.bin_counts);
    options.num_bin_counts = f.bins.size();
  }
  if (f.dim > 0) options.dim = f.dim;
  if (f.nodes > 0) options.num_nodes = f.nodes;
  if (f.configurations > 0) options.configurations = f.configurations;
  if (f.seed) options.seed = *f.seed;
  options.flip_sign = f.flip_sign ? 1 : 0;

  ddos_gradcheck_report report;
  Check(ddos_gradcheck(&options, &report), "gradcheck");
  std::cout << "max_rel_err " << FormatReal(report.max_relative_error)
            << (report.passed ? " < " : " >= ")
            << FormatTolerance(report.tolerance) << " ("
            << report.configurations << " configurations, " << report.rejected
            << " draws rejected near non-smooth points)\n";
  if (report.passed) return kExitOk;
  std::cerr << "gradient check failed: worst coordinate "
            << report.worst_coordinate << " in configuration "
            << report.worst_configuration << " (nb " << report.worst_bins
            << ", " << (report.worst_encoder == DDOS_ENCODER_LOOKUP ? "lookup" : "linear")
            << "): analytic " << FormatReal(report.worst_analytic) << ", numeric "
            << FormatReal(report.worst_numeric) << "\n";
  return kExitGradCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph node embeddings from histogram-separated similarities"};
  app.set_version_flag("--version", std::string(ddos_version()));
  app.require_subcommand(1);

  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train embeddings for a graph");
  AddTrainFlags(train, train_flags, false);
  train->add_option("--out", train_flags.out, "Embedding output file")->required();

  LinkPredFlags lp_flags;
  CLI::App* linkpred = app.add_subcommand(
      "linkpred", "Link-prediction ROC-AUC over dimensions and seeds");
  AddTrainFlags(linkpred, lp_flags.train, true);
  linkpred->add_option("--out", lp_flags.train.out, "Output directory")->required();
  linkpred->add_option("--name", lp_flags.name, "Dataset name (default: file stem)");
  linkpred->add_option("--features", lp_flags.features,
                       "Pair features: concat or hadamard");
  linkpred->add_option("--jobs", lp_flags.jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber);

  GradCheckFlags gc_flags;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Compare analytic gradients with finite differences");
  gradcheck->add_option("--nb", gc_flags.bins, "Bin count(s), comma separated")
      ->delimiter(',');
  gradcheck->add_option("--d", gc_flags.dim, "Embedding dimension");
  gradcheck->add_option("--nodes", gc_flags.nodes, "Nodes per random graph");
  gradcheck->add_option("--configs", gc_flags.configurations,
                        "Random configurations");
  gradcheck->add_option("--seed", gc_flags.seed, "Seed");
  gradcheck->add_flag("--inject-sign-flip", gc_flags.flip_sign,
                      "Negate the analytic gradient (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*train) return RunTrain(train_flags);
    if (*linkpred) return RunLinkPred(lp_flags);
    if (*gradcheck) return RunGradCheck(gc_flags);
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status() == DDOS_ERR_NUMERICAL ? kExitNumerical : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
