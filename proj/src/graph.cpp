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

#include "graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "random.hpp"

namespace ddos {

namespace {

constexpr std::uint64_t kMaxNodeId = (std::uint64_t{1} << 31) - 1;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view NextToken(std::string_view& rest) {
  std::size_t begin = 0;
  while (begin < rest.size() && IsSpace(rest[begin])) ++begin;
  std::size_t end = begin;
  while (end < rest.size() && !IsSpace(rest[end])) ++end;
  std::string_view token = rest.substr(begin, end - begin);
  rest.remove_prefix(end);
  return token;
}

NodeId ParseNodeId(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range ||
      (ec == std::errc() && value > kMaxNodeId)) {
    throw ParseError(line, "node id '" + std::string(token) + "' too large");
  }
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line,
                     "expected integer node id, got '" + std::string(token) +
                         "'");
  }
  return static_cast<NodeId>(value);
}

}  // namespace

PairSet::PairSet(std::span<const Edge> pairs) {
  keys_.reserve(pairs.size());
  for (const Edge& e : pairs) keys_.insert(e.Key());
}

Graph::Graph(NodeId num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  for (Edge& e : edges_) {
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    }
    e = Edge::Canonical(e.u, e.v);
    if (e.v >= num_nodes_) {
      throw std::invalid_argument("node id " + std::to_string(e.v) +
                                  " out of range for n=" +
                                  std::to_string(num_nodes_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(dup->u) +
                                "," + std::to_string(dup->v) + "}");
  }

  offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    offsets_[i] += offsets_[i - 1];
  }
  neighbors_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // With edges sorted by (u, v), node x first receives its smaller neighbors
  // (edges {u, x}, increasing u) and then its larger ones (edges {x, v},
  // increasing v), so every neighbor list comes out sorted.
  for (const Edge& e : edges_) {
    neighbors_[fill[e.u]++] = e.v;
    neighbors_[fill[e.v]++] = e.u;
  }
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  if (i >= num_nodes_) {
    throw std::out_of_range("node id " + std::to_string(i) + " out of range");
  }
  return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Graph::HasEdge(NodeId a, NodeId b) const {
  if (a >= num_nodes_ || b >= num_nodes_ || a == b) return false;
  auto nbrs = neighbors(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

LoadedGraph LoadEdgeList(std::istream& in) {
  std::vector<Edge> edges;
  PairSet seen;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  NodeId max_id = 0;
  bool any_line = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::string_view first = NextToken(rest);
    if (first.empty() || first.front() == '#') continue;
    std::string_view second = NextToken(rest);
    if (second.empty()) throw ParseError(line_no, "expected two node ids");
    if (!NextToken(rest).empty()) {
      throw ParseError(line_no, "expected exactly two node ids");
    }
    NodeId a = ParseNodeId(first, line_no);
    NodeId b = ParseNodeId(second, line_no);
    any_line = true;
    max_id = std::max({max_id, a, b});
    if (a == b) {
      ++self_loops;
      continue;
    }
    Edge e = Edge::Canonical(a, b);
    if (!seen.Insert(e)) {
      ++duplicates;
      continue;
    }
    edges.push_back(e);
  }
  if (in.bad()) throw IoError("read error in edge list");
  if (!any_line) throw ParseError(0, "edge list is empty");

  return LoadedGraph{Graph(max_id + 1, std::move(edges)), self_loops,
                     duplicates};
}

double SimilarityMatrix::At(NodeId i, NodeId j) const {
  if (i >= num_nodes_ || j >= num_nodes_) return 0.0;
  auto begin = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  auto end = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

std::size_t SecondOrderNonzeros(const Graph& g) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> marker(n, std::numeric_limits<NodeId>::max());
  std::size_t count = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId k : g.neighbors(i)) {
      for (NodeId j : g.neighbors(k)) {
        if (j != i && marker[j] != i) {
          marker[j] = i;
          ++count;
        }
      }
    }
  }
  return count;
}

SimilarityMatrix BuildSimilarity(const Graph& g, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("similarity order must be 1 or 2, got " +
                                std::to_string(order));
  }
  const NodeId n = g.num_nodes();
  SimilarityMatrix s;
  s.order_ = order;
  s.num_nodes_ = n;
  s.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);

  if (order == 1) {
    s.columns_.reserve(g.num_nonzeros());
    for (NodeId i = 0; i < n; ++i) {
      auto nbrs = g.neighbors(i);
      s.columns_.insert(s.columns_.end(), nbrs.begin(), nbrs.end());
      s.offsets_[i + 1] = s.columns_.size();
    }
    s.values_.assign(s.columns_.size(), 1.0);
  } else {
    s.columns_.reserve(SecondOrderNonzeros(g));
    // Row i of A*A: (A^2)_ij = number of common neighbors of i and j.
    std::vector<double> accum(n, 0.0);
    std::vector<NodeId> touched;
    for (NodeId i = 0; i < n; ++i) {
      touched.clear();
      for (NodeId k : g.neighbors(i)) {
        for (NodeId j : g.neighbors(k)) {
          if (j == i) continue;
          if (accum[j] == 0.0) touched.push_back(j);
          accum[j] += 1.0;
        }
      }
      std::sort(touched.begin(), touched.end());
      for (NodeId j : touched) {
        s.columns_.push_back(j);
        s.values_.push_back(accum[j]);
        accum[j] = 0.0;
      }
      s.offsets_[i + 1] = s.columns_.size();
    }
  }

  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t p = s.offsets_[i]; p < s.offsets_[i + 1]; ++p) {
      if (s.columns_[p] > i) {
        s.positives_.push_back({i, s.columns_[p], s.values_[p]});
      }
    }
  }
  return s;
}

EdgeSplit SplitEdges(const Graph& g, std::uint64_t seed) {
  if (g.num_edges() < 2) {
    throw std::invalid_argument("edge split needs at least 2 edges, got " +
                                std::to_string(g.num_edges()));
  }
  std::vector<Edge> shuffled(g.edges().begin(), g.edges().end());
  Rng rng = MakeRng(seed, Stream::kEdgeSplit);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  const std::size_t train_size = (shuffled.size() + 1) / 2;
  EdgeSplit split;
  split.seed = seed;
  split.train_edges.assign(shuffled.begin(),
                           shuffled.begin() + static_cast<std::ptrdiff_t>(train_size));
  split.test_edges.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(train_size),
                          shuffled.end());
  std::sort(split.train_edges.begin(), split.train_edges.end());
  std::sort(split.test_edges.begin(), split.test_edges.end());
  return split;
}

std::vector<Edge> SampleNonEdges(const Graph& g, std::size_t count,
                                 std::span<const Edge> exclude,
                                 std::uint64_t seed) {
  const std::uint64_t n = g.num_nodes();
  const std::uint64_t all_pairs = n * (n - 1) / 2;

  PairSet blocked;
  for (Edge e : exclude) {
    e = Edge::Canonical(e.u, e.v);
    if (e.u != e.v && e.v < n && !g.HasEdge(e.u, e.v)) blocked.Insert(e);
  }
  const std::uint64_t available = all_pairs - g.num_edges() - blocked.size();
  if (count > available) {
    throw InfeasibleError("requested " + std::to_string(count) +
                          " non-edges but only " + std::to_string(available) +
                          " exist (n(n-1)/2 - |E| - |exclude|)");
  }
  std::vector<Edge> out;
  if (count == 0) return out;
  out.reserve(count);
  Rng rng = MakeRng(seed, Stream::kUser);

  if (count * 2 <= available) {
    // Sparse request: rejection sampling succeeds with probability >= 1/2.
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    PairSet chosen;
    while (out.size() < count) {
      NodeId a = node(rng);
      NodeId b = node(rng);
      if (a == b) continue;
      Edge e = Edge::Canonical(a, b);
      if (g.HasEdge(e.u, e.v) || blocked.Contains(e) || !chosen.Insert(e)) {
        continue;
      }
      out.push_back(e);
    }
    return out;
  }

  std::vector<Edge> candidates;
  candidates.reserve(available);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      Edge e{u, v};
      if (!g.HasEdge(u, v) && !blocked.Contains(e)) candidates.push_back(e);
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, candidates.size() - 1);
    std::swap(candidates[k], candidates[pick(rng)]);
  }
  candidates.resize(count);
  return candidates;
}

Graph SubgraphWithEdges(const Graph& g, std::span<const Edge> keep) {
  std::vector<Edge> edges;
  edges.reserve(keep.size());
  for (Edge e : keep) {
    e = Edge::Canonical(e.u, e.v);
    if (!g.HasEdge(e.u, e.v)) {
      throw std::invalid_argument("edge {" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) +
                                  "} is not in the source graph");
    }
    edges.push_back(e);
  }
  return Graph(g.num_nodes(), std::move(edges));
}

}  // namespace ddos
