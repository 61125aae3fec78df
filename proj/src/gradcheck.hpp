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

#ifndef DDOS_GRADCHECK_HPP_
#define DDOS_GRADCHECK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "encoder.hpp"
#include "graph.hpp"
#include "histogram_loss.hpp"

namespace ddos {

inline constexpr double kGradCheckTolerance = 1e-4;

struct GradCheckOptions {
  NodeId num_nodes = 10;
  int dim = 3;
  // Configurations cycle through these bin counts, both encoder kinds and
  // both similarity orders.
  std::vector<int> bin_counts{2, 8, 64};
  int configurations = 100;
  double step = 1e-5;
  std::uint64_t seed = 1;
  // Minimum distance of every similarity from the cut at 0, the clamp at
  // +-1 and the bin nodes.
  double margin = 1e-4;
  // Negative control: compare against the negated analytic gradient.
  bool flip_sign = false;
};

struct GradCheckReport {
  // Per configuration: max_k |analytic_k - numeric_k| / max_k(|analytic_k|,
  // |numeric_k|); the report keeps the worst configuration.
  double max_relative_error = 0.0;
  int configurations = 0;
  // Random draws discarded for sitting near a non-smooth point.
  int rejected = 0;
  int worst_configuration = -1;
  int worst_bins = 0;
  EncoderKind worst_encoder = EncoderKind::kLinear;
  std::string worst_coordinate;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool passed() const { return max_relative_error < kGradCheckTolerance; }
};

// Central finite differences of Loss against GradLoss on random graphs.
GradCheckReport RunGradCheck(const GradCheckOptions& options);

// One finite-difference comparison; `coordinate` names the worst entry.
struct GradComparison {
  double relative_error = 0.0;
  std::string coordinate;
  double analytic = 0.0;
  double numeric = 0.0;
};
GradComparison CompareWithFiniteDifferences(const EncoderParams& params,
                                            const Graph& g,
                                            const PairBatch& batch,
                                            int num_bins, double step,
                                            bool flip_sign = false);

}  // namespace ddos

#endif  // DDOS_GRADCHECK_HPP_
