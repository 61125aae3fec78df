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

#include "ddos/ddos.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "encoder.hpp"
#include "errors.hpp"
#include "gradcheck.hpp"
#include "graph.hpp"
#include "linkpred.hpp"
#include "text_io.hpp"
#include "trainer.hpp"

struct ddos_graph {
  std::shared_ptr<const ddos::Graph> graph;
};

struct ddos_model {
  std::shared_ptr<const ddos::Graph> graph;
  ddos::EncoderParams params;
  Eigen::MatrixXd embeddings;
  ddos::LossCurve curve;
};

struct ddos_eval {
  ddos::EvalReport report;
};

namespace {

thread_local std::string g_last_error;

ddos_status Fail(ddos_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
ddos_status Guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return DDOS_OK;
  } catch (const ddos::ParseError& e) {
    return Fail(DDOS_ERR_PARSE, e.what());
  } catch (const ddos::IoError& e) {
    return Fail(DDOS_ERR_IO, e.what());
  } catch (const ddos::NumericalError& e) {
    return Fail(DDOS_ERR_NUMERICAL, e.what());
  } catch (const ddos::InfeasibleError& e) {
    return Fail(DDOS_ERR_INFEASIBLE, e.what());
  } catch (const std::out_of_range& e) {
    return Fail(DDOS_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return Fail(DDOS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return Fail(DDOS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(DDOS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(DDOS_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(DDOS_ERR_INTERNAL, "unknown error");
  }
}

template <typename T>
void RequireNonNull(const T* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " is null");
}

ddos::TrainConfig FromC(const ddos_train_config& c) {
  ddos::TrainConfig cfg;
  cfg.dim = c.dim;
  cfg.num_bins = c.num_bins;
  if (c.encoder != DDOS_ENCODER_LOOKUP && c.encoder != DDOS_ENCODER_LINEAR) {
    throw std::invalid_argument("unknown encoder kind");
  }
  cfg.encoder = c.encoder == DDOS_ENCODER_LOOKUP ? ddos::EncoderKind::kLookup
                                                 : ddos::EncoderKind::kLinear;
  cfg.similarity_order = c.similarity_order;
  cfg.epochs = c.epochs;
  cfg.learning_rate = c.learning_rate;
  cfg.neg_ratio = c.neg_ratio;
  cfg.pos_batch = c.pos_batch;
  cfg.seed = c.seed;
  cfg.freeze_intercept = c.freeze_intercept != 0;
  cfg.init_scale = c.init_scale;
  return cfg;
}

void ToC(const ddos::TrainConfig& cfg, ddos_train_config* c) {
  c->dim = cfg.dim;
  c->num_bins = cfg.num_bins;
  c->encoder = cfg.encoder == ddos::EncoderKind::kLookup ? DDOS_ENCODER_LOOKUP
                                                         : DDOS_ENCODER_LINEAR;
  c->similarity_order = cfg.similarity_order;
  c->epochs = cfg.epochs;
  c->learning_rate = cfg.learning_rate;
  c->neg_ratio = cfg.neg_ratio;
  c->pos_batch = cfg.pos_batch;
  c->seed = cfg.seed;
  c->freeze_intercept = cfg.freeze_intercept ? 1 : 0;
  c->init_scale = cfg.init_scale;
}

void CopyCurve(const ddos::LossCurve& curve, int64_t* steps, double* losses,
               size_t capacity) {
  if (capacity < curve.size()) {
    throw std::invalid_argument("curve buffer too small: need " +
                                std::to_string(curve.size()));
  }
  for (size_t k = 0; k < curve.size(); ++k) {
    if (steps != nullptr) steps[k] = curve[k].step;
    if (losses != nullptr) losses[k] = curve[k].loss;
  }
}

void WriteCurveFile(const ddos::LossCurve& curve, const char* path) {
  RequireNonNull(path, "path");
  ddos::WriteFileAtomically(path, [&](std::ostream& out) {
    ddos::WriteLossCurve(out, curve);
  });
}

}  // namespace

extern "C" {

const char* ddos_version(void) { return DDOS_VERSION_STRING; }

const char* ddos_last_error(void) { return g_last_error.c_str(); }

const char* ddos_status_string(ddos_status status) {
  switch (status) {
    case DDOS_OK: return "ok";
    case DDOS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DDOS_ERR_PARSE: return "parse error";
    case DDOS_ERR_IO: return "i/o error";
    case DDOS_ERR_NUMERICAL: return "numerical error";
    case DDOS_ERR_INFEASIBLE: return "infeasible request";
    case DDOS_ERR_OUT_OF_RANGE: return "out of range";
    case DDOS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ddos_status ddos_graph_load_file(const char* path, ddos_graph** out,
                                 size_t* self_loops_dropped,
                                 size_t* duplicates_dropped) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(out, "out");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ddos::IoError(std::string("cannot open graph file '") + path + "'");
    ddos::LoadedGraph loaded = ddos::LoadEdgeList(in);
    if (self_loops_dropped != nullptr) *self_loops_dropped = loaded.self_loops_dropped;
    if (duplicates_dropped != nullptr) *duplicates_dropped = loaded.duplicates_dropped;
    *out = new ddos_graph{
        std::make_shared<const ddos::Graph>(std::move(loaded.graph))};
  });
}

ddos_status ddos_graph_from_edges(uint32_t num_nodes, const uint32_t* endpoints,
                                  size_t num_edges, ddos_graph** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    if (num_edges > 0) RequireNonNull(endpoints, "endpoints");
    std::vector<ddos::Edge> edges;
    edges.reserve(num_edges);
    for (size_t k = 0; k < num_edges; ++k) {
      edges.push_back({endpoints[2 * k], endpoints[2 * k + 1]});
    }
    *out = new ddos_graph{
        std::make_shared<const ddos::Graph>(num_nodes, std::move(edges))};
  });
}

void ddos_graph_destroy(ddos_graph* graph) { delete graph; }

uint32_t ddos_graph_num_nodes(const ddos_graph* graph) {
  return graph == nullptr ? 0 : graph->graph->num_nodes();
}

size_t ddos_graph_num_edges(const ddos_graph* graph) {
  return graph == nullptr ? 0 : graph->graph->num_edges();
}

ddos_status ddos_graph_second_order_nonzeros(const ddos_graph* graph,
                                             size_t* out) {
  return Guard([&] {
    RequireNonNull(graph, "graph");
    RequireNonNull(out, "out");
    *out = ddos::SecondOrderNonzeros(*graph->graph);
  });
}

void ddos_train_config_default(ddos_train_config* cfg) {
  if (cfg != nullptr) ToC(ddos::TrainConfig{}, cfg);
}

ddos_status ddos_train_config_load(const char* path, ddos_train_config* cfg) {
  return Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(cfg, "cfg");
    ToC(ddos::LoadConfigFile(path, FromC(*cfg)), cfg);
  });
}

ddos_status ddos_train_config_set(ddos_train_config* cfg, const char* key,
                                  const char* value) {
  return Guard([&] {
    RequireNonNull(cfg, "cfg");
    RequireNonNull(key, "key");
    RequireNonNull(value, "value");
    ddos::TrainConfig updated = FromC(*cfg);
    ddos::ApplyConfigValue(updated, key, value);
    ToC(updated, cfg);
  });
}

ddos_status ddos_train_config_validate(const ddos_train_config* cfg) {
  return Guard([&] {
    RequireNonNull(cfg, "cfg");
    FromC(*cfg).Validate();
  });
}

ddos_status ddos_train(const ddos_graph* graph, const ddos_train_config* cfg,
                       ddos_model** out) {
  return Guard([&] {
    RequireNonNull(graph, "graph");
    RequireNonNull(cfg, "cfg");
    RequireNonNull(out, "out");
    ddos::TrainResult result = ddos::Train(*graph->graph, FromC(*cfg));
    auto model = std::make_unique<ddos_model>();
    model->graph = graph->graph;
    model->embeddings = ddos::EncodeAll(result.params, *graph->graph);
    model->params = std::move(result.params);
    model->curve = std::move(result.curve);
    *out = model.release();
  });
}

void ddos_model_destroy(ddos_model* model) { delete model; }

uint32_t ddos_model_num_nodes(const ddos_model* model) {
  return model == nullptr ? 0 : static_cast<uint32_t>(model->embeddings.cols());
}

int32_t ddos_model_dim(const ddos_model* model) {
  return model == nullptr ? 0 : static_cast<int32_t>(model->embeddings.rows());
}

ddos_status ddos_model_embedding(const ddos_model* model, uint32_t node,
                                 double* out, size_t capacity) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(out, "out");
    if (node >= model->embeddings.cols()) {
      throw std::out_of_range("node id " + std::to_string(node) + " out of range");
    }
    const auto d = static_cast<size_t>(model->embeddings.rows());
    if (capacity < d) throw std::invalid_argument("embedding buffer too small");
    for (size_t r = 0; r < d; ++r) {
      out[r] = model->embeddings(static_cast<Eigen::Index>(r), node);
    }
  });
}

ddos_status ddos_model_write_embeddings(const ddos_model* model,
                                        const char* path) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(path, "path");
    ddos::WriteFileAtomically(path, [&](std::ostream& out) {
      ddos::WriteEmbeddings(out, model->embeddings);
    });
  });
}

size_t ddos_model_curve_length(const ddos_model* model) {
  return model == nullptr ? 0 : model->curve.size();
}

ddos_status ddos_model_curve(const ddos_model* model, int64_t* steps,
                             double* losses, size_t capacity) {
  return Guard([&] {
    RequireNonNull(model, "model");
    CopyCurve(model->curve, steps, losses, capacity);
  });
}

ddos_status ddos_model_write_curve(const ddos_model* model, const char* path) {
  return Guard([&] {
    RequireNonNull(model, "model");
    WriteCurveFile(model->curve, path);
  });
}

ddos_status ddos_model_similarity_gap(const ddos_model* model,
                                      int32_t similarity_order,
                                      size_t sample_size, uint64_t seed,
                                      double* out) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(out, "out");
    const ddos::SimilarityMatrix sim =
        ddos::BuildSimilarity(*model->graph, similarity_order);
    *out = ddos::MeanSimilarityGap(model->params, *model->graph, sim,
                                   sample_size, seed);
  });
}

ddos_status ddos_link_prediction(const ddos_graph* graph,
                                 const ddos_train_config* cfg,
                                 ddos_pair_features features,
                                 uint64_t eval_seed, ddos_eval** out) {
  return Guard([&] {
    RequireNonNull(graph, "graph");
    RequireNonNull(cfg, "cfg");
    RequireNonNull(out, "out");
    ddos::LinkPredOptions options;
    switch (features) {
      case DDOS_PAIR_CONCAT:
        options.feature_map = ddos::PairFeatureMap::kConcat;
        break;
      case DDOS_PAIR_HADAMARD:
        options.feature_map = ddos::PairFeatureMap::kHadamard;
        break;
      default:
        throw std::invalid_argument("unknown pair feature map");
    }
    auto eval = std::make_unique<ddos_eval>();
    eval->report =
        ddos::RunLinkPrediction(*graph->graph, FromC(*cfg), eval_seed, options);
    *out = eval.release();
  });
}

void ddos_eval_destroy(ddos_eval* eval) { delete eval; }

double ddos_eval_auc(const ddos_eval* eval) {
  return eval == nullptr ? 0.0 : eval->report.auc;
}

double ddos_eval_train_auc(const ddos_eval* eval) {
  return eval == nullptr ? 0.0 : eval->report.train_auc;
}

double ddos_eval_wall_seconds(const ddos_eval* eval) {
  return eval == nullptr ? 0.0 : eval->report.wall_seconds;
}

size_t ddos_eval_train_edges(const ddos_eval* eval) {
  return eval == nullptr ? 0 : eval->report.train_edges;
}

size_t ddos_eval_test_edges(const ddos_eval* eval) {
  return eval == nullptr ? 0 : eval->report.test_edges;
}

int32_t ddos_eval_logreg_converged(const ddos_eval* eval) {
  return eval != nullptr && eval->report.logreg_converged ? 1 : 0;
}

size_t ddos_eval_curve_length(const ddos_eval* eval) {
  return eval == nullptr ? 0 : eval->report.curve.size();
}

ddos_status ddos_eval_curve(const ddos_eval* eval, int64_t* steps,
                            double* losses, size_t capacity) {
  return Guard([&] {
    RequireNonNull(eval, "eval");
    CopyCurve(eval->report.curve, steps, losses, capacity);
  });
}

ddos_status ddos_eval_write_curve(const ddos_eval* eval, const char* path) {
  return Guard([&] {
    RequireNonNull(eval, "eval");
    WriteCurveFile(eval->report.curve, path);
  });
}

void ddos_gradcheck_options_default(ddos_gradcheck_options* options) {
  if (options == nullptr) return;
  const ddos::GradCheckOptions defaults;
  std::memset(options, 0, sizeof(*options));
  options->num_nodes = defaults.num_nodes;
  options->dim = defaults.dim;
  options->num_bin_counts = defaults.bin_counts.size();
  std::copy(defaults.bin_counts.begin(), defaults.bin_counts.end(),
            options->bin_counts);
  options->configurations = defaults.configurations;
  options->step = defaults.step;
  options->seed = defaults.seed;
  options->margin = defaults.margin;
  options->flip_sign = defaults.flip_sign ? 1 : 0;
}

ddos_status ddos_gradcheck(const ddos_gradcheck_options* options,
                           ddos_gradcheck_report* report) {
  return Guard([&] {
    RequireNonNull(options, "options");
    RequireNonNull(report, "report");
    if (options->num_bin_counts == 0 ||
        options->num_bin_counts > DDOS_GRADCHECK_MAX_BIN_COUNTS) {
      throw std::invalid_argument("num_bin_counts must be in [1, 8]");
    }
    ddos::GradCheckOptions opts;
    opts.num_nodes = options->num_nodes;
    opts.dim = options->dim;
    opts.bin_counts.assign(options->bin_counts,
                           options->bin_counts + options->num_bin_counts);
    opts.configurations = options->configurations;
    opts.step = options->step;
    opts.seed = options->seed;
    opts.margin = options->margin;
    opts.flip_sign = options->flip_sign != 0;
    const ddos::GradCheckReport r = ddos::RunGradCheck(opts);

    std::memset(report, 0, sizeof(*report));
    report->max_relative_error = r.max_relative_error;
    report->tolerance = ddos::kGradCheckTolerance;
    report->passed = r.passed() ? 1 : 0;
    report->configurations = r.configurations;
    report->rejected = r.rejected;
    report->worst_configuration = r.worst_configuration;
    report->worst_bins = r.worst_bins;
    report->worst_encoder = r.worst_encoder == ddos::EncoderKind::kLookup
                                ? DDOS_ENCODER_LOOKUP
                                : DDOS_ENCODER_LINEAR;
    std::strncpy(report->worst_coordinate, r.worst_coordinate.c_str(),
                 sizeof(report->worst_coordinate) - 1);
    report->worst_analytic = r.worst_analytic;
    report->worst_numeric = r.worst_numeric;
  });
}

ddos_status ddos_roc_auc(const double* scores, const int32_t* labels,
                         size_t count, double* out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    if (count > 0) {
      RequireNonNull(scores, "scores");
      RequireNonNull(labels, "labels");
    }
    std::vector<int> converted(labels, labels + count);
    *out = ddos::RocAuc({scores, count}, converted);
  });
}

}  // extern "C"
