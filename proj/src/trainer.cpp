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

#include "trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "text_io.hpp"

namespace ddos {

namespace {

constexpr int kMaxConsecutiveRejections = 1000;

NodePair DrawZeroSimilarityPair(const SimilarityMatrix& sim, Rng& rng) {
  std::uniform_int_distribution<NodeId> node(0, sim.num_nodes() - 1);
  for (int attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
    const NodeId i = node(rng);
    const NodeId j = node(rng);
    if (i != j && sim.At(i, j) == 0.0) return {i, j};
  }
  throw InfeasibleError(
      "negative sampling rejected " +
      std::to_string(kMaxConsecutiveRejections) +
      " consecutive draws; the graph has (almost) no dissimilar pairs");
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument(msg);
  };
  if (dim < 1) fail("d must be >= 1");
  if (num_bins < 2) fail("nb must be >= 2");
  if (similarity_order != 1 && similarity_order != 2) fail("order must be 1 or 2");
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail("lr must be a finite value >= 0");
  }
  if (!(neg_ratio > 0.0) || !std::isfinite(neg_ratio)) fail("neg_ratio must be > 0");
  if (pos_batch < 1) fail("pos_batch must be >= 1");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    fail("init_scale must be >= 0");
  }
}

void WriteLossCurve(std::ostream& out, const LossCurve& curve) {
  out << "step,loss\n";
  for (const LossPoint& p : curve) {
    out << p.step << ',' << FormatDouble(p.loss) << '\n';
  }
}

PairBatch SampleBatch(const SimilarityMatrix& sim, const TrainConfig& cfg,
                      Rng& rng) {
  auto positives = sim.positive_pairs();
  if (positives.empty()) {
    throw std::invalid_argument("similarity matrix has no positive pairs");
  }
  PairBatch batch;
  batch.positives.reserve(static_cast<std::size_t>(cfg.pos_batch));
  std::uniform_int_distribution<std::size_t> pick(0, positives.size() - 1);
  for (int k = 0; k < cfg.pos_batch; ++k) {
    batch.positives.push_back(positives[pick(rng)]);
  }
  const auto num_negatives =
      static_cast<std::size_t>(std::ceil(cfg.neg_ratio * cfg.pos_batch));
  batch.negatives.reserve(num_negatives);
  for (std::size_t k = 0; k < num_negatives; ++k) {
    batch.negatives.push_back(DrawZeroSimilarityPair(sim, rng));
  }
  return batch;
}

TrainResult Train(const Graph& g, const TrainConfig& cfg,
                  const TrainObserver& observer) {
  cfg.Validate();
  if (g.num_edges() < 2) {
    throw std::invalid_argument("training needs a graph with >= 2 edges");
  }
  const SimilarityMatrix sim = BuildSimilarity(g, cfg.similarity_order);
  const std::size_t num_positives = sim.positive_pairs().size();
  if (num_positives == 0) {
    throw std::invalid_argument("similarity matrix has no positive pairs");
  }

  TrainConfig step_cfg = cfg;
  step_cfg.pos_batch = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(cfg.pos_batch), num_positives));
  const std::int64_t steps_per_epoch = static_cast<std::int64_t>(
      (num_positives + step_cfg.pos_batch - 1) / step_cfg.pos_batch);
  const std::int64_t total_steps = steps_per_epoch * cfg.epochs;

  TrainResult result;
  result.params = InitParams(cfg.encoder, cfg.dim, g.num_nodes(), cfg.seed,
                             cfg.init_scale);
  result.curve.reserve(static_cast<std::size_t>(total_steps));
  Rng rng = MakeRng(cfg.seed, Stream::kBatches);

  for (std::int64_t step = 0; step < total_steps; ++step) {
    const PairBatch batch = SampleBatch(sim, step_cfg, rng);
    LossGradient grad;
    try {
      grad = GradLoss(result.params, g, batch, cfg.num_bins);
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(step) + ": " + e.what() +
                           " (|params| = " +
                           FormatDouble(result.params.weights.norm()) + ")");
    }
    result.curve.push_back({step, grad.loss});

    result.params.weights -= cfg.learning_rate * grad.d_weights;
    if (cfg.encoder == EncoderKind::kLinear && !cfg.freeze_intercept) {
      result.params.bias -= cfg.learning_rate * grad.d_bias;
    }
    if (!result.params.weights.allFinite() || !result.params.bias.allFinite()) {
      throw NumericalError("step " + std::to_string(step) +
                           ": parameters became non-finite (|grad| = " +
                           FormatDouble(grad.d_weights.norm()) + ")");
    }
    if (observer) observer(step, result.params);
  }
  return result;
}

double MeanSimilarityGap(const EncoderParams& params, const Graph& g,
                         const SimilarityMatrix& sim, std::size_t sample_size,
                         std::uint64_t seed) {
  if (sample_size == 0) throw std::invalid_argument("sample size must be > 0");
  auto positives = sim.positive_pairs();
  if (positives.empty()) {
    throw std::invalid_argument("similarity matrix has no positive pairs");
  }
  const Eigen::MatrixXd embeddings = EncodeAll(params, g);
  Rng rng = MakeRng(seed, Stream::kGap);
  std::uniform_int_distribution<std::size_t> pick(0, positives.size() - 1);

  double positive_sum = 0.0;
  for (std::size_t k = 0; k < sample_size; ++k) {
    const WeightedPair& p = positives[pick(rng)];
    positive_sum += Decode(embeddings.col(p.i), embeddings.col(p.j));
  }
  double negative_sum = 0.0;
  for (std::size_t k = 0; k < sample_size; ++k) {
    const NodePair p = DrawZeroSimilarityPair(sim, rng);
    negative_sum += Decode(embeddings.col(p.i), embeddings.col(p.j));
  }
  return (positive_sum - negative_sum) / static_cast<double>(sample_size);
}

}  // namespace ddos
