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

#include "linkpred.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "encoder.hpp"
#include "random.hpp"

namespace ddos {

std::string ToString(PairFeatureMap map) {
  return map == PairFeatureMap::kConcat ? "concat" : "hadamard";
}

PairFeatureMap ParsePairFeatureMap(std::string_view name) {
  if (name == "concat") return PairFeatureMap::kConcat;
  if (name == "hadamard") return PairFeatureMap::kHadamard;
  throw std::invalid_argument("unknown pair feature map '" + std::string(name) +
                              "' (expected concat or hadamard)");
}

int FeatureWidth(PairFeatureMap map, int dim) {
  return map == PairFeatureMap::kConcat ? 2 * dim : dim;
}

Eigen::VectorXd PairFeatures(const Eigen::Ref<const Eigen::VectorXd>& e_u,
                             const Eigen::Ref<const Eigen::VectorXd>& e_v,
                             PairFeatureMap map) {
  if (e_u.size() != e_v.size()) {
    throw std::invalid_argument("pair features: embedding dimensions differ");
  }
  if (map == PairFeatureMap::kHadamard) return e_u.cwiseProduct(e_v);
  Eigen::VectorXd x(e_u.size() + e_v.size());
  x << e_u, e_v;
  return x;
}

Eigen::VectorXd PairFeatures(NodeId u, NodeId v,
                             const Eigen::MatrixXd& embeddings,
                             PairFeatureMap map) {
  if (u > v) std::swap(u, v);
  return PairFeatures(embeddings.col(u), embeddings.col(v), map);
}

LabeledPairSet BuildLabeledSet(const Graph& g, std::span<const Edge> edges,
                               std::span<const Edge> non_edges,
                               const Eigen::MatrixXd& embeddings,
                               PairFeatureMap map) {
  if (edges.empty()) throw std::invalid_argument("no positive pairs on this side");
  if (non_edges.empty()) {
    throw std::invalid_argument("no non-edges on this side (single class)");
  }
  LabeledPairSet out;
  const auto rows = static_cast<Eigen::Index>(edges.size() + non_edges.size());
  out.features.resize(
      rows, FeatureWidth(map, static_cast<int>(embeddings.rows())));
  out.pairs.reserve(static_cast<std::size_t>(rows));
  out.labels.reserve(static_cast<std::size_t>(rows));

  auto add = [&](Edge e, int label) {
    e = Edge::Canonical(e.u, e.v);
    const Eigen::Index row = static_cast<Eigen::Index>(out.pairs.size());
    out.features.row(row) = PairFeatures(e.u, e.v, embeddings, map).transpose();
    out.pairs.push_back(e);
    out.labels.push_back(label);
  };
  for (const Edge& e : edges) {
    if (!g.HasEdge(e.u, e.v)) {
      throw std::invalid_argument("labeled edge is not in the graph");
    }
    add(e, 1);
  }
  for (const Edge& e : non_edges) {
    if (e.u == e.v || g.HasEdge(e.u, e.v)) {
      throw std::invalid_argument("non-edge list contains an edge of the graph");
    }
    add(e, 0);
  }
  return out;
}

namespace {

// log(1 + exp(-m)) without overflow.
double LogisticLoss(double margin) {
  return margin > 0.0 ? std::log1p(std::exp(-margin))
                      : -margin + std::log1p(std::exp(margin));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void CheckBothClasses(const LabeledPairSet& data) {
  const auto positives = std::count(data.labels.begin(), data.labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(data.labels.size())) {
    throw std::invalid_argument("logistic regression needs both classes");
  }
}

}  // namespace

Eigen::VectorXd LogRegModel::Decision(const Eigen::MatrixXd& features) const {
  return (features * weights).array() + intercept;
}

double LogRegObjective(const LabeledPairSet& data,
                       const Eigen::Ref<const Eigen::VectorXd>& weights,
                       double intercept, double l2) {
  const Eigen::VectorXd z = (data.features * weights).array() + intercept;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double sign = data.labels[static_cast<std::size_t>(k)] == 1 ? 1.0 : -1.0;
    sum += LogisticLoss(sign * z(k));
  }
  return sum / static_cast<double>(z.size()) + 0.5 * l2 * weights.squaredNorm();
}

Eigen::VectorXd LogRegGradient(const LabeledPairSet& data,
                               const Eigen::Ref<const Eigen::VectorXd>& weights,
                               double intercept, double l2) {
  const Eigen::VectorXd z = (data.features * weights).array() + intercept;
  // d/dz of the mean loss is (sigmoid(z) - y) / m.
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    residual(k) = Sigmoid(z(k)) - data.labels[static_cast<std::size_t>(k)];
  }
  residual /= static_cast<double>(z.size());
  Eigen::VectorXd grad(weights.size() + 1);
  grad.head(weights.size()) = data.features.transpose() * residual + l2 * weights;
  grad(weights.size()) = residual.sum();
  return grad;
}

LogRegModel FitLogReg(const LabeledPairSet& data, const LogRegOptions& options) {
  CheckBothClasses(data);
  if (data.features.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw std::invalid_argument("feature rows and labels differ in count");
  }
  const Eigen::Index dim = data.features.cols();
  // theta = (weights, intercept)
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim + 1);
  auto objective = [&](const Eigen::VectorXd& t) {
    return LogRegObjective(data, t.head(dim), t(dim), options.l2);
  };

  LogRegModel model;
  model.l2 = options.l2;
  double value = objective(theta);
  model.objective_trace.push_back(value);
  double step = 1.0;
  constexpr double kArmijo = 0.5;
  constexpr double kMinStep = 1e-20;

  Eigen::VectorXd grad = LogRegGradient(data, theta.head(dim), theta(dim), options.l2);
  while (true) {
    model.gradient_norm = grad.norm();
    if (model.gradient_norm < options.tol) {
      model.converged = true;
      break;
    }
    if (model.iterations >= options.max_iters) break;

    step = std::min(step * 2.0, 1e6);
    const double decrease = kArmijo * grad.squaredNorm();
    Eigen::VectorXd candidate;
    double candidate_value = 0.0;
    while (true) {
      candidate = theta - step * grad;
      candidate_value = objective(candidate);
      if (candidate_value <= value - step * decrease) break;
      step *= 0.5;
      if (step < kMinStep) break;
    }
    if (step < kMinStep) break;  // no descent possible at machine precision
    theta = std::move(candidate);
    value = candidate_value;
    model.objective_trace.push_back(value);
    ++model.iterations;
    grad = LogRegGradient(data, theta.head(dim), theta(dim), options.l2);
  }
  model.weights = theta.head(dim);
  model.intercept = theta(dim);
  return model;
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  std::uint64_t num_pos = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] != 0 && labels[k] != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    if (std::isnan(scores[k])) throw std::invalid_argument("score is NaN");
    num_pos += static_cast<std::uint64_t>(labels[k]);
  }
  const std::uint64_t num_neg = labels.size() - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    throw std::invalid_argument("ROC-AUC needs both classes");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum: a tie block on 1-based ranks [first, last]
  // gives each member the average rank (first + last) / 2.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && scores[order[end]] == scores[order[begin]]) ++end;
    const std::uint64_t doubled_rank = (begin + 1) + end;
    for (std::size_t k = begin; k < end; ++k) {
      if (labels[order[k]] == 1) twice_rank_sum += doubled_rank;
    }
    begin = end;
  }
  const std::uint64_t twice_u = twice_rank_sum - num_pos * (num_pos + 1);
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

EvalReport RunLinkPrediction(const Graph& g, const TrainConfig& cfg,
                             std::uint64_t eval_seed,
                             const LinkPredOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  cfg.Validate();

  const EdgeSplit split = SplitEdges(g, eval_seed);
  const Graph train_graph = SubgraphWithEdges(g, split.train_edges);
  TrainResult trained = Train(train_graph, cfg);
  // The linear encoder reads adjacency columns of the training graph only.
  const Eigen::MatrixXd embeddings = EncodeAll(trained.params, train_graph);

  const std::vector<Edge> train_non_edges =
      SampleNonEdges(g, split.train_edges.size(), {},
                     DeriveSeed(eval_seed, Stream::kNonEdgesTrain));
  const std::vector<Edge> test_non_edges =
      SampleNonEdges(g, split.test_edges.size(), train_non_edges,
                     DeriveSeed(eval_seed, Stream::kNonEdgesTest));

  const LabeledPairSet train_set =
      BuildLabeledSet(g, split.train_edges, train_non_edges, embeddings,
                      options.feature_map);
  const LabeledPairSet test_set =
      BuildLabeledSet(g, split.test_edges, test_non_edges, embeddings,
                      options.feature_map);
  const LogRegModel model = FitLogReg(train_set, options.logreg);

  const Eigen::VectorXd train_scores = model.Decision(train_set.features);
  const Eigen::VectorXd test_scores = model.Decision(test_set.features);

  EvalReport report;
  report.dim = cfg.dim;
  report.auc = RocAuc({test_scores.data(), static_cast<std::size_t>(test_scores.size())},
                      test_set.labels);
  report.train_auc =
      RocAuc({train_scores.data(), static_cast<std::size_t>(train_scores.size())},
             train_set.labels);
  report.eval_seed = eval_seed;
  report.config = cfg;
  report.train_edges = split.train_edges.size();
  report.test_edges = split.test_edges.size();
  report.logreg_converged = model.converged;
  report.feature_map = options.feature_map;
  report.curve = std::move(trained.curve);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ddos
