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

#ifndef DDOS_TRAINER_HPP_
#define DDOS_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "encoder.hpp"
#include "graph.hpp"
#include "histogram_loss.hpp"
#include "random.hpp"

namespace ddos {

struct TrainConfig {
  int dim = 8;
  int num_bins = 64;
  EncoderKind encoder = EncoderKind::kLinear;
  int similarity_order = 1;
  int epochs = 200;
  double learning_rate = 0.05;
  // Negatives drawn per positive in each step.
  double neg_ratio = 5.0;
  // Positives per step; the trainer caps it at the number of positive pairs.
  int pos_batch = 1024;
  std::uint64_t seed = 0;
  bool freeze_intercept = false;
  double init_scale = 0.1;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

struct LossPoint {
  std::int64_t step = 0;
  double loss = 0.0;
};
using LossCurve = std::vector<LossPoint>;

// CSV with header "step,loss".
void WriteLossCurve(std::ostream& out, const LossCurve& curve);

// pos_batch positives drawn uniformly with replacement (carrying s_ij) and
// ceil(neg_ratio * pos_batch) uniform pairs with s_ij == 0. Throws
// InfeasibleError after 1000 consecutive rejected negative draws.
PairBatch SampleBatch(const SimilarityMatrix& sim, const TrainConfig& cfg,
                      Rng& rng);

struct TrainResult {
  EncoderParams params;
  LossCurve curve;
};

// Called after every update with the step index and the updated parameters.
using TrainObserver = std::function<void(std::int64_t, const EncoderParams&)>;

// Plain SGD on the histogram loss with fresh negatives every step.
// epochs * ceil(|positives| / pos_batch) steps. Throws NumericalError on a
// non-finite loss, gradient or parameter update.
TrainResult Train(const Graph& g, const TrainConfig& cfg,
                  const TrainObserver& observer = {});

// Mean decoded similarity over sampled positive pairs minus the mean over
// sampled zero-similarity pairs.
double MeanSimilarityGap(const EncoderParams& params, const Graph& g,
                         const SimilarityMatrix& sim, std::size_t sample_size,
                         std::uint64_t seed);

}  // namespace ddos

#endif  // DDOS_TRAINER_HPP_
