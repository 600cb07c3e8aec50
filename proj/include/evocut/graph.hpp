#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evocut/random.hpp"
#include "evocut/rational.hpp"

namespace evocut {

using Vertex = std::uint32_t;
using Volume = std::uint64_t;

/// Sorted list of distinct vertex ids.
class VertexSet {
 public:
  VertexSet() = default;

  /// Sorts `ids`; throws std::invalid_argument on duplicates.
  explicit VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
      throw std::invalid_argument("VertexSet: duplicate vertex id");
  }
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}

  static VertexSet all(std::size_t n) {
    VertexSet s;
    s.ids_.resize(n);
    std::iota(s.ids_.begin(), s.ids_.end(), Vertex{0});
    return s;
  }

  /// Builds from an already sorted, duplicate-free range without re-checking.
  static VertexSet from_sorted(std::vector<Vertex> ids) {
    VertexSet s;
    s.ids_ = std::move(ids);
    return s;
  }

  bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<Vertex>& ids() const { return ids_; }

  VertexSet symmetric_difference(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_symmetric_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                                  std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  VertexSet intersection(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                          std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  VertexSet difference(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  VertexSet set_union(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  VertexSet complement(std::size_t n) const { return all(n).difference(*this); }

  bool includes(const VertexSet& other) const {
    return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end());
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

/// Immutable simple undirected graph in CSR form. Vertices are dense
/// [0, n); `label(v)` is the id the vertex had in the input file.
class Graph {
 public:
  Graph() = default;

  /// Builds from dense-id edges. Throws std::invalid_argument on self-loops,
  /// duplicate edges, out-of-range ids, isolated vertices, or no edges.
  Graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
        std::vector<std::uint64_t> labels = {})
      : labels_(std::move(labels)) {
    if (edges.empty()) throw std::invalid_argument("graph has no edges");
    if (labels_.empty()) {
      labels_.resize(n);
      std::iota(labels_.begin(), labels_.end(), std::uint64_t{0});
    }
    if (labels_.size() != n) throw std::invalid_argument("label map size differs from vertex count");

    std::vector<std::uint64_t> degree(n, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v)
        throw std::invalid_argument("self-loop at vertex " + std::to_string(labels_[u]));
      ++degree[u];
      ++degree[v];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (degree[v] == 0)
        throw std::invalid_argument("vertex " + std::to_string(labels_[v]) + " has degree 0");
      offsets_[v + 1] = offsets_[v] + degree[v];
    }
    adjacency_.resize(offsets_[n]);
    std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
      adjacency_[fill[u]++] = v;
      adjacency_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
      std::sort(first, last);
      if (auto dup = std::adjacent_find(first, last); dup != last)
        throw std::invalid_argument("duplicate edge " + std::to_string(labels_[v]) + " " +
                                    std::to_string(labels_[*dup]));
    }
  }

  Graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges)
      : Graph(n, std::span<const std::pair<Vertex, Vertex>>(edges.begin(), edges.size())) {}

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  Volume total_volume() const { return adjacency_.size(); }

  Volume degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  /// The vertex whose degree block covers position r of [0, vol(V)), i.e.
  /// the vertex drawn with probability d(v)/vol(V) when r is uniform.
  Vertex vertex_at_volume(Volume r) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), r);
    return static_cast<Vertex>(it - offsets_.begin() - 1);
  }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool valid(Vertex v) const { return v < vertex_count(); }
  void check_vertex(Vertex v) const {
    if (!valid(v))
      throw std::out_of_range("vertex id " + std::to_string(v) + " out of range [0," +
                              std::to_string(vertex_count()) + ")");
  }
  void check_set(const VertexSet& s) const {
    if (!s.empty()) check_vertex(s.ids().back());
  }

  std::uint64_t label(Vertex v) const { return labels_[v]; }
  const std::vector<std::uint64_t>& labels() const { return labels_; }

  /// Dense id for an input label, or throws std::out_of_range.
  Vertex vertex_of_label(std::uint64_t label) const {
    // Loaders emit labels in increasing order.
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it != labels_.end() && *it == label) return static_cast<Vertex>(it - labels_.begin());
    auto lin = std::find(labels_.begin(), labels_.end(), label);
    if (lin == labels_.end()) throw std::out_of_range("unknown vertex label " + std::to_string(label));
    return static_cast<Vertex>(lin - labels_.begin());
  }

  /// Each edge once as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<std::uint64_t> labels_;
};

inline Volume volume(const Graph& g, const VertexSet& s) {
  g.check_set(s);
  Volume total = 0;
  for (Vertex v : s) total += g.degree(v);
  return total;
}

/// Number of edges with exactly one endpoint in `s`.
inline Volume boundary_edge_count(const Graph& g, const VertexSet& s) {
  g.check_set(s);
  Volume cut = 0;
  for (Vertex v : s)
    for (Vertex w : g.neighbors(v))
      if (!s.contains(w)) ++cut;
  return cut;
}

/// cut(S) / vol(S), exact. Throws on the empty set.
inline Rational conductance(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw std::invalid_argument("conductance of the empty set");
  return Rational(BigInt(boundary_edge_count(g, s)), BigInt(volume(g, s)));
}

inline double conductance_value(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw std::invalid_argument("conductance of the empty set");
  return static_cast<double>(boundary_edge_count(g, s)) / static_cast<double>(volume(g, s));
}

/// cut(S) / min(vol(S), vol(S^c)). Reported alongside, never used to stop.
inline double balanced_conductance(const Graph& g, const VertexSet& s) {
  const Volume vol = volume(g, s);
  const Volume smaller = std::min(vol, g.total_volume() - vol);
  if (smaller == 0) return 0.0;
  return static_cast<double>(boundary_edge_count(g, s)) / static_cast<double>(smaller);
}

inline Vertex random_neighbor(const Graph& g, Vertex x, Rng& rng) {
  g.check_vertex(x);
  auto nb = g.neighbors(x);
  return nb[rng.below(nb.size())];
}

/// Subgraph induced by `keep`, with vertices of degree 0 in the induced graph
/// dropped. `to_parent[i]` is the parent id of vertex i of `graph`.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_parent;
  VertexSet dropped;  // in parent ids
  bool empty() const { return to_parent.empty(); }
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& keep) {
  g.check_set(keep);
  InducedSubgraph out;
  std::vector<Vertex> kept;
  std::vector<Vertex> dropped;
  for (Vertex v : keep) {
    bool has_neighbor = false;
    for (Vertex w : g.neighbors(v))
      if (keep.contains(w)) {
        has_neighbor = true;
        break;
      }
    (has_neighbor ? kept : dropped).push_back(v);
  }
  out.dropped = VertexSet::from_sorted(std::move(dropped));
  if (kept.empty()) return out;

  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::uint64_t> labels;
  labels.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    labels.push_back(g.label(kept[i]));
    for (Vertex w : g.neighbors(kept[i])) {
      if (w <= kept[i]) continue;
      auto it = std::lower_bound(kept.begin(), kept.end(), w);
      if (it != kept.end() && *it == w)
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(it - kept.begin()));
    }
  }
  out.graph = Graph(kept.size(), edges, std::move(labels));
  out.to_parent = std::move(kept);
  return out;
}

}  // namespace evocut
