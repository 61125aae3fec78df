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

// Link-prediction evaluation: split the edges in half, embed the training
// half, fit a logistic regression on pair features (concatenated endpoint
// embeddings by default) of train edges vs. sampled non-edges, and score
// ROC-AUC on the test half.

#ifndef DDOS_LINKPRED_HPP_
#define DDOS_LINKPRED_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"
#include "trainer.hpp"

namespace ddos {

enum class PairFeatureMap {
  // (e_u, e_v), 2d columns.
  kConcat,
  // e_u * e_v elementwise, d columns.
  kHadamard,
};

std::string ToString(PairFeatureMap map);
// "concat" or "hadamard"; throws std::invalid_argument otherwise.
PairFeatureMap ParsePairFeatureMap(std::string_view name);
int FeatureWidth(PairFeatureMap map, int dim);

// Features of (u, v) with u < v; the pair is reordered if needed.
Eigen::VectorXd PairFeatures(NodeId u, NodeId v,
                             const Eigen::MatrixXd& embeddings,
                             PairFeatureMap map = PairFeatureMap::kConcat);
// Features in argument order. Throws on dimension mismatch.
Eigen::VectorXd PairFeatures(const Eigen::Ref<const Eigen::VectorXd>& e_u,
                             const Eigen::Ref<const Eigen::VectorXd>& e_v,
                             PairFeatureMap map = PairFeatureMap::kConcat);

struct LabeledPairSet {
  std::vector<Edge> pairs;
  // One row per pair, FeatureWidth columns.
  Eigen::MatrixXd features;
  std::vector<int> labels;
};

// Rows labeled 1 for `edges`, 0 for `non_edges`. Throws when either list is
// empty, an edge is missing from g or a non-edge is present in g.
LabeledPairSet BuildLabeledSet(const Graph& g, std::span<const Edge> edges,
                               std::span<const Edge> non_edges,
                               const Eigen::MatrixXd& embeddings,
                               PairFeatureMap map = PairFeatureMap::kConcat);

struct LogRegOptions {
  double l2 = 1e-4;
  int max_iters = 500;
  double tol = 1e-6;
};

struct LogRegModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double l2 = 0.0;
  // False when max_iters ran out before |grad| < tol.
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  // Objective after every accepted step, starting at the initial point.
  std::vector<double> objective_trace;

  Eigen::VectorXd Decision(const Eigen::MatrixXd& features) const;
};

// mean_k log(1 + exp(-y_k (x_k.w + c))) + l2 |w|^2 / 2, y in {-1, +1}.
double LogRegObjective(const LabeledPairSet& data,
                       const Eigen::Ref<const Eigen::VectorXd>& weights,
                       double intercept, double l2);
// Gradient of LogRegObjective as (d weights..., d intercept).
Eigen::VectorXd LogRegGradient(const LabeledPairSet& data,
                               const Eigen::Ref<const Eigen::VectorXd>& weights,
                               double intercept, double l2);

// Full-batch gradient descent with Armijo backtracking from zero.
LogRegModel FitLogReg(const LabeledPairSet& data,
                      const LogRegOptions& options = {});

// Mann-Whitney AUC with average ranks for ties:
// P(score+ > score-) + P(score+ == score-) / 2.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
  std::string dataset;
  int dim = 0;
  double auc = 0.0;
  double train_auc = 0.0;
  std::uint64_t eval_seed = 0;
  TrainConfig config;
  double wall_seconds = 0.0;
  std::size_t train_edges = 0;
  std::size_t test_edges = 0;
  bool logreg_converged = false;
  PairFeatureMap feature_map = PairFeatureMap::kConcat;
  LossCurve curve;
};

struct LinkPredOptions {
  LogRegOptions logreg;
  PairFeatureMap feature_map = PairFeatureMap::kConcat;
};

EvalReport RunLinkPrediction(const Graph& g, const TrainConfig& cfg,
                             std::uint64_t eval_seed,
                             const LinkPredOptions& options = {});

}  // namespace ddos

#endif  // DDOS_LINKPRED_HPP_
