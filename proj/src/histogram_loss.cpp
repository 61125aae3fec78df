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

#include "histogram_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "text_io.hpp"

namespace ddos {

namespace {

constexpr double kRangeSlack = 1e-9;

void CheckBins(int num_bins) {
  if (num_bins < 2) {
    throw std::invalid_argument("number of bins must be >= 2, got " +
                                std::to_string(num_bins));
  }
}

}  // namespace

double Decode(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("decode: embedding dimensions differ");
  }
  const double denom = a.norm() * b.norm() + kDecodeEpsilon;
  return std::clamp(a.dot(b) / denom, -1.0, 1.0);
}

DecodeGradient DecodeWithGradient(const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("decode: embedding dimensions differ");
  }
  const double norm_a = a.norm();
  const double norm_b = b.norm();
  const double denom = norm_a * norm_b + kDecodeEpsilon;
  const double raw = a.dot(b) / denom;

  DecodeGradient out;
  out.value = std::clamp(raw, -1.0, 1.0);
  // A zero embedding (e.g. an isolated node under the linear encoder with
  // b = 0) has no direction; the guarded formula's slope there is b / eps,
  // which is an artifact of the guard, so such pairs carry no gradient.
  if (norm_a == 0.0 || norm_b == 0.0) {
    out.d_first = Eigen::VectorXd::Zero(a.size());
    out.d_second = Eigen::VectorXd::Zero(b.size());
    return out;
  }
  // d/da [a.b / (|a||b| + eps)] = b / D - raw * (|b| / |a|) * a / D.
  out.d_first = b / denom - (raw * norm_b / (norm_a * denom)) * a;
  out.d_second = a / denom - (raw * norm_a / (norm_b * denom)) * b;
  return out;
}

BinLocation LocateOnGrid(double value, int num_bins) {
  CheckBins(num_bins);
  if (!(value >= -1.0 - kRangeSlack && value <= 1.0 + kRangeSlack)) {
    throw std::domain_error("histogram value " + FormatDouble(value) +
                            " outside [-1, 1]");
  }
  value = std::clamp(value, -1.0, 1.0);
  const double position = (value + 1.0) * 0.5 * (num_bins - 1);
  const int lower =
      std::min(static_cast<int>(std::floor(position)), num_bins - 2);
  return {lower, position - lower};
}

SoftHistogram::SoftHistogram(int num_bins) {
  CheckBins(num_bins);
  masses_.assign(static_cast<std::size_t>(num_bins), 0.0);
}

void SoftHistogram::Add(double value, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("histogram weights must be finite and >= 0");
  }
  const BinLocation loc = LocateOnGrid(value, num_bins());
  masses_[loc.lower] += weight * (1.0 - loc.upper_fraction);
  masses_[loc.lower + 1] += weight * loc.upper_fraction;
  total_ += weight;
}

SoftHistogram BuildSoftHistogram(std::span<const double> values,
                                 std::span<const double> weights,
                                 int num_bins) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("values and weights differ in length");
  }
  SoftHistogram h(num_bins);
  for (std::size_t k = 0; k < values.size(); ++k) h.Add(values[k], weights[k]);
  return h;
}

std::vector<double> CumulativeDifferences(const SoftHistogram& p,
                                          const SoftHistogram& q) {
  if (p.num_bins() != q.num_bins()) {
    throw std::invalid_argument("histograms have different bin counts");
  }
  if (!(p.total() > 0.0) || !(q.total() > 0.0)) {
    throw std::invalid_argument("earth mover distance needs nonzero mass");
  }
  std::vector<double> phi(static_cast<std::size_t>(p.num_bins()));
  double running = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    running += p.masses()[i] / p.total() - q.masses()[i] / q.total();
    phi[i] = running;
  }
  return phi;
}

double Emd(const SoftHistogram& p, const SoftHistogram& q) {
  double sum = 0.0;
  for (double phi : CumulativeDifferences(p, q)) sum += std::abs(phi);
  return sum;
}

double EmdAsym(const SoftHistogram& p, const SoftHistogram& q) {
  double sum = 0.0;
  for (double phi : CumulativeDifferences(p, q)) sum += phi;
  return sum;
}

std::vector<double> CutNegatives(std::span<const double> values) {
  std::vector<double> kept;
  std::copy_if(values.begin(), values.end(), std::back_inserter(kept),
               [](double v) { return v >= 0.0; });
  return kept;
}

void WriteHistogram(std::ostream& out, const SoftHistogram& h) {
  out << h.num_bins() << '\n';
  for (int r = 0; r < h.num_bins(); ++r) {
    out << FormatDouble(h.node(r)) << ' ' << FormatDouble(h.masses()[r])
        << '\n';
  }
}

namespace {

void CheckBatch(const PairBatch& batch, NodeId n) {
  if (batch.positives.empty()) {
    throw std::invalid_argument("pair batch has no positive pairs");
  }
  auto check = [n](NodeId i, NodeId j) {
    if (i >= n || j >= n) throw std::out_of_range("pair node id out of range");
    if (i == j) throw std::invalid_argument("pair with identical nodes");
  };
  for (const WeightedPair& p : batch.positives) {
    check(p.i, p.j);
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
      throw std::invalid_argument("positive pair weights must be > 0");
    }
  }
  for (const NodePair& p : batch.negatives) check(p.i, p.j);
}

void CheckLossValue(double loss, int num_bins) {
  if (!std::isfinite(loss)) throw NumericalError("loss is not finite");
  if (loss < -static_cast<double>(num_bins)) {
    throw NumericalError("loss " + FormatDouble(loss) +
                         " below the -N_b bound");
  }
}

LossBreakdown Forward(const Eigen::MatrixXd& embeddings, const PairBatch& batch,
                      int num_bins) {
  LossBreakdown out;
  out.positive_histogram = SoftHistogram(num_bins);
  out.cut_negative_histogram = SoftHistogram(num_bins);

  out.positive_similarities.reserve(batch.positives.size());
  for (const WeightedPair& p : batch.positives) {
    const double s = Decode(embeddings.col(p.i), embeddings.col(p.j));
    out.positive_similarities.push_back(s);
    out.positive_histogram.Add(s, p.weight);
  }
  out.negative_similarities.reserve(batch.negatives.size());
  for (const NodePair& p : batch.negatives) {
    const double s = Decode(embeddings.col(p.i), embeddings.col(p.j));
    out.negative_similarities.push_back(s);
  }
  for (double s : CutNegatives(out.negative_similarities)) {
    out.cut_negative_histogram.Add(s, 1.0);
    ++out.kept_negatives;
  }
  if (out.kept_negatives == 0) out.cut_negative_histogram.Add(-1.0, 1.0);

  out.loss = -EmdAsym(out.cut_negative_histogram, out.positive_histogram);
  CheckLossValue(out.loss, num_bins);
  return out;
}

}  // namespace

LossBreakdown EvaluateLoss(const EncoderParams& params, const Graph& g,
                           const PairBatch& batch, int num_bins) {
  CheckBins(num_bins);
  CheckBatch(batch, g.num_nodes());
  return Forward(EncodeAll(params, g), batch, num_bins);
}

double Loss(const EncoderParams& params, const Graph& g, const PairBatch& batch,
            int num_bins) {
  return EvaluateLoss(params, g, batch, num_bins).loss;
}

LossGradient GradLoss(const EncoderParams& params, const Graph& g,
                      const PairBatch& batch, int num_bins) {
  CheckBins(num_bins);
  CheckBatch(batch, g.num_nodes());
  const Eigen::MatrixXd embeddings = EncodeAll(params, g);
  const LossBreakdown fwd = Forward(embeddings, batch, num_bins);

  // loss = -sum_i phi_i, so mass in bin j of the first histogram (P-_cut)
  // counts (N_b - j) times with a minus sign and mass of P+ with a plus sign.
  const double spacing = 2.0 / (num_bins - 1);
  std::vector<double> d_positive_mass(num_bins);
  std::vector<double> d_negative_mass(num_bins);
  const double positive_total = fwd.positive_histogram.total();
  const double negative_total = fwd.cut_negative_histogram.total();
  for (int j = 0; j < num_bins; ++j) {
    d_positive_mass[j] = (num_bins - j) / positive_total;
    d_negative_mass[j] = -(num_bins - j) / negative_total;
  }
  // Triangular kernel: d(mass_lower)/dv = -w / delta, d(mass_upper)/dv = w / delta.
  auto d_value = [&](double v, double weight, const std::vector<double>& dm) {
    const BinLocation loc = LocateOnGrid(v, num_bins);
    return weight / spacing * (dm[loc.lower + 1] - dm[loc.lower]);
  };

  Eigen::MatrixXd d_embeddings =
      Eigen::MatrixXd::Zero(embeddings.rows(), embeddings.cols());
  auto backprop_pair = [&](NodeId i, NodeId j, double d_similarity) {
    if (d_similarity == 0.0) return;
    const DecodeGradient dg =
        DecodeWithGradient(embeddings.col(i), embeddings.col(j));
    d_embeddings.col(i) += d_similarity * dg.d_first;
    d_embeddings.col(j) += d_similarity * dg.d_second;
  };

  for (std::size_t k = 0; k < batch.positives.size(); ++k) {
    const WeightedPair& p = batch.positives[k];
    backprop_pair(p.i, p.j,
                  d_value(fwd.positive_similarities[k], p.weight,
                          d_positive_mass));
  }
  // The empty-cut fallback mass at -1 is a constant.
  if (fwd.kept_negatives > 0) {
    for (std::size_t k = 0; k < batch.negatives.size(); ++k) {
      const double s = fwd.negative_similarities[k];
      if (s < 0.0) continue;
      backprop_pair(batch.negatives[k].i, batch.negatives[k].j,
                    d_value(s, 1.0, d_negative_mass));
    }
  }

  LossGradient grad;
  grad.loss = fwd.loss;
  if (params.kind == EncoderKind::kLookup) {
    grad.d_weights = std::move(d_embeddings);
  } else {
    // E = W A + b 1^T with A symmetric: dW = dE A, db = dE 1.
    grad.d_weights = Eigen::MatrixXd::Zero(params.dim(), g.num_nodes());
    for (NodeId k = 0; k < g.num_nodes(); ++k) {
      auto col = grad.d_weights.col(k);
      for (NodeId i : g.neighbors(k)) col += d_embeddings.col(i);
    }
    grad.d_bias = d_embeddings.rowwise().sum();
  }
  if (!grad.d_weights.allFinite() || !grad.d_bias.allFinite()) {
    throw NumericalError("gradient is not finite");
  }
  return grad;
}

}  // namespace ddos
