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

#include "encoder.hpp"

#include <charconv>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace ddos {

std::string_view ToString(EncoderKind kind) {
  return kind == EncoderKind::kLookup ? "lookup" : "linear";
}

EncoderKind ParseEncoderKind(std::string_view name) {
  if (name == "lookup") return EncoderKind::kLookup;
  if (name == "linear") return EncoderKind::kLinear;
  throw std::invalid_argument("unknown encoder '" + std::string(name) +
                              "' (expected lookup or linear)");
}

void EncoderParams::Validate() const {
  if (weights.rows() < 1) throw std::invalid_argument("dimension must be >= 1");
  if (weights.rows() > weights.cols()) {
    throw std::invalid_argument("dimension " + std::to_string(weights.rows()) +
                                " exceeds node count " +
                                std::to_string(weights.cols()));
  }
  if (kind == EncoderKind::kLinear && bias.size() != weights.rows()) {
    throw std::invalid_argument("linear encoder needs a bias of size d");
  }
  if (kind == EncoderKind::kLookup && bias.size() != 0) {
    throw std::invalid_argument("lookup encoder has no bias");
  }
  if (!weights.allFinite() || !bias.allFinite()) {
    throw std::invalid_argument("encoder parameters must be finite");
  }
}

EncoderParams InitParams(EncoderKind kind, int dim, NodeId num_nodes,
                         std::uint64_t seed, double scale) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (static_cast<NodeId>(dim) > num_nodes) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " exceeds node count " +
                                std::to_string(num_nodes));
  }
  if (!(scale >= 0.0)) throw std::invalid_argument("init scale must be >= 0");

  EncoderParams params;
  params.kind = kind;
  params.weights.resize(dim, num_nodes);
  Rng rng = MakeRng(seed, Stream::kInit);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (Eigen::Index j = 0; j < params.weights.cols(); ++j) {
    for (Eigen::Index r = 0; r < params.weights.rows(); ++r) {
      params.weights(r, j) = scale * normal(rng);
    }
  }
  if (kind == EncoderKind::kLinear) params.bias = Eigen::VectorXd::Zero(dim);
  return params;
}

namespace {

void CheckShapes(const EncoderParams& params, const Graph& g) {
  if (params.num_nodes() != g.num_nodes()) {
    throw std::invalid_argument(
        "encoder built for " + std::to_string(params.num_nodes()) +
        " nodes, graph has " + std::to_string(g.num_nodes()));
  }
}

}  // namespace

Eigen::VectorXd Encode(const EncoderParams& params, const Graph& g, NodeId i) {
  CheckShapes(params, g);
  if (i >= g.num_nodes()) {
    throw std::out_of_range("node id " + std::to_string(i) + " out of range");
  }
  if (params.kind == EncoderKind::kLookup) return params.weights.col(i);
  Eigen::VectorXd e = params.bias;
  for (NodeId k : g.neighbors(i)) e += params.weights.col(k);
  return e;
}

Eigen::MatrixXd EncodeAll(const EncoderParams& params, const Graph& g) {
  CheckShapes(params, g);
  if (params.kind == EncoderKind::kLookup) return params.weights;
  Eigen::MatrixXd out(params.dim(), g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    auto col = out.col(i);
    col = params.bias;
    for (NodeId k : g.neighbors(i)) col += params.weights.col(k);
  }
  return out;
}

void WriteEmbeddings(std::ostream& out, const Eigen::MatrixXd& embeddings) {
  out << embeddings.cols() << ' ' << embeddings.rows() << '\n';
  for (Eigen::Index i = 0; i < embeddings.cols(); ++i) {
    out << i;
    for (Eigen::Index r = 0; r < embeddings.rows(); ++r) {
      out << ' ' << FormatDouble(embeddings(r, i));
    }
    out << '\n';
  }
}

Eigen::MatrixXd ReadEmbeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) {
      throw ParseError(line_no, "unexpected end of embedding file");
    }
    ++line_no;
    return std::istringstream(line);
  };
  auto parse_double = [&](const std::string& token) {
    double v = 0.0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(line_no, "bad number '" + token + "'");
    }
    return v;
  };

  long long n = 0;
  long long d = 0;
  if (!(next_line() >> n >> d) || n < 0 || d < 1) {
    throw ParseError(line_no, "expected header 'n d'");
  }
  Eigen::MatrixXd out(d, n);
  for (long long i = 0; i < n; ++i) {
    std::istringstream row = next_line();
    long long id = -1;
    if (!(row >> id) || id != i) {
      throw ParseError(line_no, "expected node id " + std::to_string(i));
    }
    for (long long r = 0; r < d; ++r) {
      std::string token;
      if (!(row >> token)) throw ParseError(line_no, "too few coordinates");
      out(r, i) = parse_double(token);
    }
  }
  return out;
}

}  // namespace ddos
