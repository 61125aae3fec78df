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

// Similarity-distribution discrimination loss.
//
// Decoded similarities of similar pairs (P+) and of dissimilar pairs (P-) are
// binned into soft histograms over [-1, 1] with a triangular kernel: N_b nodes
// t_r = -1 + r * delta, delta = 2 / (N_b - 1), and a value v puts weight
// w * (1 - |v - t_r| / delta) on each node within delta of it. The objective
// is the negated asymmetric earth mover distance between the non-negative
// part of P- and P+:
//
//   phi_i = sum_{j <= i} (P-_cut[j] / |P-_cut| - P+[j] / |P+|)
//   loss  = -sum_i phi_i
//
// which is minimized when P+ sits to the right of P-_cut. Negative similarities
// of dissimilar pairs are not penalized at all.

#ifndef DDOS_HISTOGRAM_LOSS_HPP_
#define DDOS_HISTOGRAM_LOSS_HPP_

#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "encoder.hpp"
#include "graph.hpp"

namespace ddos {

inline constexpr double kDecodeEpsilon = 1e-12;

// Cosine similarity a.b / (|a||b| + eps), clamped to [-1, 1].
double Decode(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b);

struct DecodeGradient {
  double value = 0.0;
  Eigen::VectorXd d_first;
  Eigen::VectorXd d_second;
};

// Decode plus its exact partial derivatives (the clamp is treated as identity).
DecodeGradient DecodeWithGradient(const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b);

// Position of a value on the bin grid: it splits its weight between node
// `lower` (fraction 1 - upper_fraction) and node `lower + 1`.
struct BinLocation {
  int lower = 0;
  double upper_fraction = 0.0;
};
BinLocation LocateOnGrid(double value, int num_bins);

class SoftHistogram {
 public:
  explicit SoftHistogram(int num_bins);

  int num_bins() const { return static_cast<int>(masses_.size()); }
  double spacing() const { return 2.0 / (num_bins() - 1); }
  // 0-based node position t_r.
  double node(int r) const { return -1.0 + r * spacing(); }
  std::span<const double> masses() const { return masses_; }
  double total() const { return total_; }

  // Values must lie in [-1, 1] up to 1e-9 slack; throws std::domain_error.
  void Add(double value, double weight);

 private:
  std::vector<double> masses_;
  double total_ = 0.0;
};

SoftHistogram BuildSoftHistogram(std::span<const double> values,
                                 std::span<const double> weights,
                                 int num_bins);

// phi_i = sum_{j <= i} (p_j / |p| - q_j / |q|). Throws on zero mass or
// mismatched bin counts.
std::vector<double> CumulativeDifferences(const SoftHistogram& p,
                                          const SoftHistogram& q);
// sum_i |phi_i|, in units of bins.
double Emd(const SoftHistogram& p, const SoftHistogram& q);
// sum_i phi_i; positive when q lies to the right of p.
double EmdAsym(const SoftHistogram& p, const SoftHistogram& q);

// Entries >= 0, order preserved.
std::vector<double> CutNegatives(std::span<const double> values);

// "N_b" then one "node mass" line per bin.
void WriteHistogram(std::ostream& out, const SoftHistogram& h);

struct NodePair {
  NodeId i = 0;
  NodeId j = 0;
};

struct PairBatch {
  std::vector<WeightedPair> positives;
  std::vector<NodePair> negatives;
};

// Decoded similarities and histograms behind one loss evaluation.
struct LossBreakdown {
  std::vector<double> positive_similarities;
  std::vector<double> negative_similarities;
  SoftHistogram positive_histogram{2};
  // Non-negative part of the negatives, or a unit mass at -1 when empty.
  SoftHistogram cut_negative_histogram{2};
  std::size_t kept_negatives = 0;
  double loss = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  // dZ (lookup) or dW (linear), d x n.
  Eigen::MatrixXd d_weights;
  // db for the linear kind, empty for lookup.
  Eigen::VectorXd d_bias;
};

// Throws std::invalid_argument on an empty positive set, invalid pairs or
// num_bins < 2, and NumericalError when the loss is not finite or breaks the
// -N_b lower bound.
double Loss(const EncoderParams& params, const Graph& g, const PairBatch& batch,
            int num_bins);
LossBreakdown EvaluateLoss(const EncoderParams& params, const Graph& g,
                           const PairBatch& batch, int num_bins);

// Exact gradient of Loss. Histogram totals are constants: |P+| is the sum of
// positive weights and |P-_cut| the number of kept negatives, whose
// membership is fixed at the current parameters.
LossGradient GradLoss(const EncoderParams& params, const Graph& g,
                      const PairBatch& batch, int num_bins);

}  // namespace ddos

#endif  // DDOS_HISTOGRAM_LOSS_HPP_
