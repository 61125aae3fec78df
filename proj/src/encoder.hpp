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

#ifndef DDOS_ENCODER_HPP_
#define DDOS_ENCODER_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>

#include <Eigen/Dense>

#include "graph.hpp"

namespace ddos {

enum class EncoderKind {
  // Free embedding table: E_i = Z e_i.
  kLookup,
  // Affine map of the adjacency column: E_i = W a_i + b.
  kLinear,
};

std::string_view ToString(EncoderKind kind);
// Accepts "lookup" or "linear"; throws std::invalid_argument otherwise.
EncoderKind ParseEncoderKind(std::string_view name);

// `weights` is Z (lookup) or W (linear), d x n, column j belongs to node j.
// `bias` is b for the linear kind and empty for lookup.
struct EncoderParams {
  EncoderKind kind = EncoderKind::kLinear;
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  int dim() const { return static_cast<int>(weights.rows()); }
  NodeId num_nodes() const { return static_cast<NodeId>(weights.cols()); }

  // Shape and finiteness checks; throws std::invalid_argument.
  void Validate() const;
};

// Gaussian(0, scale^2) entries, zero bias; deterministic per seed.
EncoderParams InitParams(EncoderKind kind, int dim, NodeId num_nodes,
                         std::uint64_t seed, double scale);

// Embedding of node i. For the linear kind, `g` supplies a_i.
Eigen::VectorXd Encode(const EncoderParams& params, const Graph& g, NodeId i);

// All embeddings as a d x n matrix; for the linear kind this is W A + b 1^T
// evaluated with the sparse adjacency.
Eigen::MatrixXd EncodeAll(const EncoderParams& params, const Graph& g);

// Embedding file: "n d" header, then "node v_1 ... v_d" per node, with
// shortest round-trip decimal formatting.
void WriteEmbeddings(std::ostream& out, const Eigen::MatrixXd& embeddings);
Eigen::MatrixXd ReadEmbeddings(std::istream& in);

}  // namespace ddos

#endif  // DDOS_ENCODER_HPP_
