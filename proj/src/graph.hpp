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

// Undirected, unweighted graphs in compressed sparse row form, pairwise
// similarity matrices derived from them, and the edge bookkeeping used by the
// link-prediction protocol (train/test splits, non-edge sampling).

#ifndef DDOS_GRAPH_HPP_
#define DDOS_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <unordered_set>
#include <vector>

namespace ddos {

using NodeId = std::uint32_t;

// Unordered node pair stored canonically with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge Canonical(NodeId a, NodeId b) {
    return a < b ? Edge{a, b} : Edge{b, a};
  }
  std::uint64_t Key() const {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Hash set of canonical pairs.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::span<const Edge> pairs);

  bool Insert(Edge e) { return keys_.insert(e.Key()).second; }
  bool Contains(Edge e) const { return keys_.contains(e.Key()); }
  std::size_t size() const { return keys_.size(); }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

// Immutable undirected simple graph on nodes 0..n-1.
//
// Adjacency is kept as CSR with sorted neighbor lists; the neighbor list of
// node i doubles as the sparse column a_i of the adjacency matrix.
class Graph {
 public:
  // Throws std::invalid_argument on self-loops, duplicate pairs or ids >= n.
  Graph(NodeId num_nodes, std::vector<Edge> edges);

  NodeId num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  // Stored nonzeros of the symmetric adjacency matrix (2 * |E|).
  std::size_t num_nonzeros() const { return neighbors_.size(); }

  // Sorted by (u, v).
  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId i) const;
  std::size_t degree(NodeId i) const { return neighbors(i).size(); }
  bool HasEdge(NodeId a, NodeId b) const;

 private:
  NodeId num_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

struct LoadedGraph {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

// Reads a whitespace-separated edge list. '#' lines and blank lines are
// skipped, CRLF is accepted, n = 1 + max id. Self-loops and repeated pairs
// (in either orientation) are dropped and counted. Throws ParseError.
LoadedGraph LoadEdgeList(std::istream& in);

struct WeightedPair {
  NodeId i = 0;
  NodeId j = 0;
  double weight = 0.0;
};

// Sparse symmetric nonnegative similarity matrix with zero diagonal.
class SimilarityMatrix {
 public:
  int order() const { return order_; }
  NodeId num_nodes() const { return num_nodes_; }
  std::size_t num_nonzeros() const { return columns_.size(); }

  // s_ij, 0 when not stored.
  double At(NodeId i, NodeId j) const;
  // Each unordered pair with s_ij > 0 once, i < j, in row-major order.
  std::span<const WeightedPair> positive_pairs() const { return positives_; }

 private:
  friend SimilarityMatrix BuildSimilarity(const Graph& g, int order);

  int order_ = 1;
  NodeId num_nodes_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> columns_;
  std::vector<double> values_;
  std::vector<WeightedPair> positives_;
};

// Number of off-diagonal nonzeros of A*A, computed without materializing it.
std::size_t SecondOrderNonzeros(const Graph& g);

// order 1: S = A. order 2: S = A*A with the diagonal zeroed.
SimilarityMatrix BuildSimilarity(const Graph& g, int order);

struct EdgeSplit {
  std::vector<Edge> train_edges;
  std::vector<Edge> test_edges;
  std::uint64_t seed = 0;
};

// Uniform random halving of the edge set; |train| = ceil(|E| / 2).
EdgeSplit SplitEdges(const Graph& g, std::uint64_t seed);

// `count` distinct pairs that are neither edges of g nor in `exclude`.
// Throws InfeasibleError when fewer candidates exist.
std::vector<Edge> SampleNonEdges(const Graph& g, std::size_t count,
                                 std::span<const Edge> exclude,
                                 std::uint64_t seed);

// Same node set, edge set replaced by `keep` (which must be a subset).
Graph SubgraphWithEdges(const Graph& g, std::span<const Edge> keep);

}  // namespace ddos

#endif  // DDOS_GRAPH_HPP_
