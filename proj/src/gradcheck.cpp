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

#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "random.hpp"

namespace ddos {

namespace {

constexpr double kEdgeProbability = 0.35;
constexpr int kMaxDraws = 1000;

struct Configuration {
  Graph graph;
  EncoderParams params;
  PairBatch batch;
};

Graph RandomGraph(NodeId n, Rng& rng) {
  std::bernoulli_distribution coin(kEdgeProbability);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return Graph(n, std::move(edges));
}

bool NearNonSmoothPoint(double s, int num_bins, double margin, bool negative) {
  if (negative && std::abs(s) < margin) return true;
  if (std::abs(s) > 1.0 - margin) return true;
  const double position = (s + 1.0) * 0.5 * (num_bins - 1);
  const double spacing = 2.0 / (num_bins - 1);
  return std::abs(position - std::round(position)) * spacing < margin;
}

std::optional<Configuration> DrawConfiguration(const GradCheckOptions& options,
                                               EncoderKind kind, int order,
                                               int num_bins, Rng& rng) {
  Graph g = RandomGraph(options.num_nodes, rng);
  if (g.num_edges() < 2) return std::nullopt;
  const SimilarityMatrix sim = BuildSimilarity(g, order);

  PairBatch batch;
  batch.positives.assign(sim.positive_pairs().begin(), sim.positive_pairs().end());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j = i + 1; j < g.num_nodes(); ++j) {
      if (sim.At(i, j) == 0.0) batch.negatives.push_back({i, j});
    }
  }
  if (batch.positives.empty() || batch.negatives.empty()) return std::nullopt;

  EncoderParams params =
      InitParams(kind, options.dim, g.num_nodes(), rng(), 1.0);
  if (kind == EncoderKind::kLinear) {
    std::normal_distribution<double> normal(0.0, 0.5);
    for (Eigen::Index r = 0; r < params.bias.size(); ++r) params.bias(r) = normal(rng);
  }

  const LossBreakdown fwd = EvaluateLoss(params, g, batch, num_bins);
  for (double s : fwd.positive_similarities) {
    if (NearNonSmoothPoint(s, num_bins, options.margin, false)) return std::nullopt;
  }
  for (double s : fwd.negative_similarities) {
    if (NearNonSmoothPoint(s, num_bins, options.margin, true)) return std::nullopt;
  }
  return Configuration{std::move(g), std::move(params), std::move(batch)};
}

}  // namespace

GradComparison CompareWithFiniteDifferences(const EncoderParams& params,
                                            const Graph& g,
                                            const PairBatch& batch,
                                            int num_bins, double step,
                                            bool flip_sign) {
  const LossGradient grad = GradLoss(params, g, batch, num_bins);
  const double sign = flip_sign ? -1.0 : 1.0;

  EncoderParams probe = params;
  auto central_difference = [&](double& coordinate) {
    const double saved = coordinate;
    coordinate = saved + step;
    const double up = Loss(probe, g, batch, num_bins);
    coordinate = saved - step;
    const double down = Loss(probe, g, batch, num_bins);
    coordinate = saved;
    return (up - down) / (2.0 * step);
  };

  struct Entry {
    std::string name;
    double analytic;
    double numeric;
  };
  std::vector<Entry> entries;
  const char* table = params.kind == EncoderKind::kLookup ? "Z" : "W";
  for (Eigen::Index c = 0; c < probe.weights.cols(); ++c) {
    for (Eigen::Index r = 0; r < probe.weights.rows(); ++r) {
      entries.push_back({std::string(table) + "[" + std::to_string(r) + "," +
                             std::to_string(c) + "]",
                         sign * grad.d_weights(r, c),
                         central_difference(probe.weights(r, c))});
    }
  }
  for (Eigen::Index r = 0; r < probe.bias.size(); ++r) {
    entries.push_back({"b[" + std::to_string(r) + "]", sign * grad.d_bias(r),
                       central_difference(probe.bias(r))});
  }

  double scale = 0.0;
  for (const Entry& e : entries) {
    scale = std::max({scale, std::abs(e.analytic), std::abs(e.numeric)});
  }
  GradComparison out;
  if (scale == 0.0) return out;
  for (const Entry& e : entries) {
    const double err = std::abs(e.analytic - e.numeric) / scale;
    if (err >= out.relative_error) {
      out = {err, e.name, e.analytic, e.numeric};
    }
  }
  return out;
}

GradCheckReport RunGradCheck(const GradCheckOptions& options) {
  if (options.bin_counts.empty()) throw std::invalid_argument("no bin counts");
  if (options.configurations < 1) throw std::invalid_argument("no configurations");
  if (options.num_nodes < 3) throw std::invalid_argument("need >= 3 nodes");

  GradCheckReport report;
  Rng rng = MakeRng(options.seed, Stream::kGradCheck);
  const int num_counts = static_cast<int>(options.bin_counts.size());

  for (int c = 0; c < options.configurations; ++c) {
    const int num_bins = options.bin_counts[static_cast<std::size_t>(c % num_counts)];
    const EncoderKind kind =
        (c / num_counts) % 2 == 0 ? EncoderKind::kLinear : EncoderKind::kLookup;
    const int order = (c / (2 * num_counts)) % 2 == 0 ? 1 : 2;

    std::optional<Configuration> config;
    for (int draw = 0; draw < kMaxDraws && !config; ++draw) {
      config = DrawConfiguration(options, kind, order, num_bins, rng);
      if (!config) ++report.rejected;
    }
    if (!config) {
      throw std::runtime_error("could not draw a configuration away from "
                               "non-smooth points");
    }

    const GradComparison cmp = CompareWithFiniteDifferences(
        config->params, config->graph, config->batch, num_bins, options.step,
        options.flip_sign);
    ++report.configurations;
    if (report.worst_configuration < 0 ||
        cmp.relative_error > report.max_relative_error) {
      report.max_relative_error = cmp.relative_error;
      report.worst_configuration = c;
      report.worst_bins = num_bins;
      report.worst_encoder = kind;
      report.worst_coordinate = cmp.coordinate;
      report.worst_analytic = cmp.analytic;
      report.worst_numeric = cmp.numeric;
    }
  }
  return report;
}

}  // namespace ddos
