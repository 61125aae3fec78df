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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "oracles.hpp"

namespace ddos {
namespace {

using testing::CompleteGraph;
using testing::RandomGraph;
using testing::Spearman;
using testing::TwoCliques;

TrainConfig ToyConfig(EncoderKind kind, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.dim = 2;
  cfg.encoder = kind;
  cfg.seed = seed;
  return cfg;
}

TEST(SampleBatch, Counts) {
  const Graph g = RandomGraph(60, 0.1, 3);
  const SimilarityMatrix sim = BuildSimilarity(g, 1);
  TrainConfig cfg;
  cfg.pos_batch = 100;
  cfg.neg_ratio = 5.0;
  Rng rng(1);
  const PairBatch batch = SampleBatch(sim, cfg, rng);
  EXPECT_EQ(batch.positives.size(), 100u);
  EXPECT_EQ(batch.negatives.size(), 500u);

  cfg.neg_ratio = 0.33;
  EXPECT_EQ(SampleBatch(sim, cfg, rng).negatives.size(), 33u);
}

TEST(SampleBatch, PairsRespectSimilarity) {
  for (int order : {1, 2}) {
    const Graph g = RandomGraph(40, 0.1, 9);
    const SimilarityMatrix sim = BuildSimilarity(g, order);
    TrainConfig cfg;
    cfg.pos_batch = 200;
    Rng rng(order);
    const PairBatch batch = SampleBatch(sim, cfg, rng);
    for (const WeightedPair& p : batch.positives) {
      EXPECT_GT(p.weight, 0.0);
      EXPECT_EQ(p.weight, sim.At(p.i, p.j));
    }
    for (const NodePair& p : batch.negatives) {
      EXPECT_NE(p.i, p.j);
      EXPECT_EQ(sim.At(p.i, p.j), 0.0);
    }
  }
}

TEST(SampleBatch, CompleteGraphHasNoNegatives) {
  const SimilarityMatrix sim = BuildSimilarity(CompleteGraph(5), 1);
  Rng rng(0);
  EXPECT_THROW(SampleBatch(sim, TrainConfig{}, rng), InfeasibleError);
}

TEST(SampleBatch, DeterministicForFixedState) {
  const SimilarityMatrix sim = BuildSimilarity(RandomGraph(30, 0.2, 4), 2);
  TrainConfig cfg;
  cfg.pos_batch = 50;
  Rng a(77);
  Rng b(77);
  const PairBatch x = SampleBatch(sim, cfg, a);
  const PairBatch y = SampleBatch(sim, cfg, b);
  ASSERT_EQ(x.positives.size(), y.positives.size());
  for (std::size_t k = 0; k < x.positives.size(); ++k) {
    EXPECT_EQ(x.positives[k].i, y.positives[k].i);
    EXPECT_EQ(x.positives[k].j, y.positives[k].j);
  }
  for (std::size_t k = 0; k < x.negatives.size(); ++k) {
    EXPECT_EQ(x.negatives[k].i, y.negatives[k].i);
    EXPECT_EQ(x.negatives[k].j, y.negatives[k].j);
  }
}

TEST(Train, ZeroLearningRateLeavesParamsAtInit) {
  const Graph g = TwoCliques();
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    TrainConfig cfg = ToyConfig(kind, 3);
    cfg.learning_rate = 0.0;
    cfg.epochs = 20;
    const TrainResult r = Train(g, cfg);
    const EncoderParams init = InitParams(kind, 2, g.num_nodes(), 3, cfg.init_scale);
    EXPECT_EQ(r.params.weights, init.weights);
    EXPECT_EQ(r.params.bias, init.bias);
    // Same parameters every step; only the sampled pairs vary, so the mean
    // stays flat over the run.
    double first_half = 0.0;
    double second_half = 0.0;
    for (std::size_t k = 0; k < 10; ++k) first_half += r.curve[k].loss / 10.0;
    for (std::size_t k = 10; k < 20; ++k) second_half += r.curve[k].loss / 10.0;
    EXPECT_NEAR(first_half, second_half, 0.25 * std::abs(first_half) + 0.5);
  }
}

TEST(Train, ZeroLearningRateFlatCurveFromZeroInit) {
  // Zero embeddings decode every pair to 0, whatever the batch.
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.init_scale = 0.0;
  cfg.epochs = 15;
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    cfg.encoder = kind;
    const TrainResult r = Train(RandomGraph(30, 0.2, 2), cfg);
    ASSERT_EQ(r.curve.size(), 15u);
    for (const LossPoint& p : r.curve) EXPECT_EQ(p.loss, r.curve.front().loss);
  }
}

TEST(Train, BitIdenticalPerSeed) {
  const Graph g = RandomGraph(40, 0.15, 2);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.pos_batch = 16;
  cfg.seed = 5;
  const TrainResult a = Train(g, cfg);
  const TrainResult b = Train(g, cfg);
  EXPECT_EQ(a.params.weights, b.params.weights);
  EXPECT_EQ(a.params.bias, b.params.bias);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t k = 0; k < a.curve.size(); ++k) {
    EXPECT_EQ(a.curve[k].loss, b.curve[k].loss);
  }
  cfg.seed = 6;
  EXPECT_NE(Train(g, cfg).params.weights, a.params.weights);
}

TEST(Train, StepCountAndCurveShape) {
  const Graph g = RandomGraph(40, 0.15, 2);
  const std::size_t positives = BuildSimilarity(g, 1).positive_pairs().size();
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.pos_batch = 16;
  cfg.num_bins = 16;
  const TrainResult r = Train(g, cfg);
  EXPECT_EQ(r.curve.size(), 3 * ((positives + 15) / 16));
  for (std::size_t k = 0; k < r.curve.size(); ++k) {
    EXPECT_EQ(r.curve[k].step, static_cast<std::int64_t>(k));
    EXPECT_GE(r.curve[k].loss, -16.0);
  }

  cfg.pos_batch = 100000;
  EXPECT_EQ(Train(g, cfg).curve.size(), 3u);
}

TEST(Train, LossAboveLowerBoundOnToy) {
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    for (int bins : {2, 3, 64}) {
      TrainConfig cfg = ToyConfig(kind, 1);
      cfg.num_bins = bins;
      for (const LossPoint& p : Train(TwoCliques(), cfg).curve) {
        EXPECT_GE(p.loss, -static_cast<double>(bins));
      }
    }
  }
}

TEST(Train, TwoCliquesSeparate) {
  const Graph g = TwoCliques();
  const SimilarityMatrix sim = BuildSimilarity(g, 1);
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const TrainResult r = Train(g, ToyConfig(kind, seed));
      const Eigen::MatrixXd e = EncodeAll(r.params, g);
      double intra = 0.0;
      double inter = 0.0;
      int n_intra = 0;
      int n_inter = 0;
      for (NodeId i = 0; i < 10; ++i) {
        for (NodeId j = i + 1; j < 10; ++j) {
          const double s = e.col(i).dot(e.col(j)) / (e.col(i).norm() * e.col(j).norm());
          if ((i < 5) == (j < 5)) {
            intra += s;
            ++n_intra;
          } else {
            inter += s;
            ++n_inter;
          }
        }
      }
      EXPECT_GT(intra / n_intra, inter / n_inter) << ToString(kind) << " seed " << seed;
      EXPECT_GT(MeanSimilarityGap(r.params, g, sim, 500, seed), 0.5)
          << ToString(kind) << " seed " << seed;
    }
  }
}

TEST(Train, ToyLossDecreasesAveragedOverSeeds) {
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    double early = 0.0;
    double late = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const LossCurve curve = Train(TwoCliques(), ToyConfig(kind, seed)).curve;
      for (std::size_t k = 0; k < 10; ++k) early += curve[k].loss;
      for (std::size_t k = curve.size() - 10; k < curve.size(); ++k) late += curve[k].loss;
    }
    EXPECT_LT(late, early) << ToString(kind);
  }
}

// Gap checkpoints every 10 steps plus the untrained state, averaged over
// seeds 0-4; the rank correlation with the step index is the trend statistic.
TEST(Train, ToyGapTrendSpearmanAbove08) {
  const Graph g = TwoCliques();
  const SimilarityMatrix sim = BuildSimilarity(g, 1);
  for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
    std::vector<double> mean_gap;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const TrainConfig cfg = ToyConfig(kind, seed);
      std::vector<double> gap{MeanSimilarityGap(
          InitParams(kind, cfg.dim, g.num_nodes(), seed, cfg.init_scale), g, sim, 500, 1)};
      Train(g, cfg, [&](std::int64_t step, const EncoderParams& p) {
        if ((step + 1) % 10 == 0) gap.push_back(MeanSimilarityGap(p, g, sim, 500, 1));
      });
      if (mean_gap.empty()) mean_gap.assign(gap.size(), 0.0);
      for (std::size_t k = 0; k < gap.size(); ++k) mean_gap[k] += gap[k] / 5.0;
    }
    std::vector<double> steps(mean_gap.size());
    for (std::size_t k = 0; k < steps.size(); ++k) steps[k] = 10.0 * static_cast<double>(k);
    const double rho = Spearman(steps, mean_gap);
    RecordProperty(std::string(ToString(kind)) + "_spearman", std::to_string(rho));
    EXPECT_GT(rho, 0.8) << ToString(kind);
  }
}

TEST(Train, NonFiniteUpdateAbortsWithStep) {
  TrainConfig cfg = ToyConfig(EncoderKind::kLookup, 0);
  cfg.learning_rate = 1e308;
  cfg.init_scale = 1.0;
  try {
    Train(TwoCliques(), cfg);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("|grad|"), std::string::npos) << e.what();
  }
}

TEST(Train, RejectsBadInput) {
  TrainConfig cfg;
  EXPECT_THROW(Train(Graph(3, {{0, 1}}), cfg), std::invalid_argument);
  cfg.epochs = 0;
  EXPECT_THROW(Train(TwoCliques(), cfg), std::invalid_argument);
}

TEST(TrainConfig, ValidateNamesField) {
  auto message = [](TrainConfig cfg) {
    try {
      cfg.Validate();
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  TrainConfig cfg;
  EXPECT_EQ(message(cfg), "");
  cfg.neg_ratio = 0.0;
  EXPECT_NE(message(cfg).find("neg_ratio"), std::string::npos);
  cfg = {};
  cfg.pos_batch = 0;
  EXPECT_NE(message(cfg).find("pos_batch"), std::string::npos);
  cfg = {};
  cfg.num_bins = 1;
  EXPECT_NE(message(cfg).find("nb"), std::string::npos);
  cfg = {};
  cfg.learning_rate = std::numeric_limits<double>::infinity();
  EXPECT_NE(message(cfg).find("lr"), std::string::npos);
  cfg = {};
  cfg.similarity_order = 3;
  EXPECT_NE(message(cfg).find("order"), std::string::npos);
}

TEST(MeanSimilarityGap, UntrainedNearZero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = RandomGraph(80, 0.08, seed);
    const SimilarityMatrix sim = BuildSimilarity(g, 1);
    for (int d : {8, 16}) {
      for (EncoderKind kind : {EncoderKind::kLookup, EncoderKind::kLinear}) {
        const EncoderParams p = InitParams(kind, d, 80, seed, 0.1);
        EXPECT_LT(std::abs(MeanSimilarityGap(p, g, sim, 500, seed)), 0.2);
      }
    }
  }
}

TEST(MeanSimilarityGap, IdenticalEmbeddingsGiveZero) {
  const Graph g = RandomGraph(20, 0.2, 1);
  EncoderParams p;
  p.kind = EncoderKind::kLookup;
  p.weights = Eigen::Vector3d(0.3, -1.0, 2.0).replicate(1, 20);
  EXPECT_DOUBLE_EQ(MeanSimilarityGap(p, g, BuildSimilarity(g, 1), 100, 3), 0.0);
}

TEST(LossCurve, CsvFormat) {
  std::ostringstream out;
  WriteLossCurve(out, {{0, -0.5}, {1, -1.25}});
  EXPECT_EQ(out.str(), "step,loss\n0,-0.5\n1,-1.25\n");
}

}  // namespace
}  // namespace ddos
