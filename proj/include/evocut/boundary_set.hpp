#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evocut/graph.hpp"
#include "evocut/rational.hpp"

namespace evocut {

/// p(y,S) as an unreduced integer pair: (e(y,S) + d(y)*[y in S]) / (2 d(y)).
struct WalkProb {
  std::uint64_t num;
  std::uint64_t den;
};

/// A dynamic vertex set S that also maintains its two-sided vertex boundary
///   delta(S) = {y in S : e(y,S^c) > 0} u {y not in S : e(y,S) > 0}
/// together with e(y,S) for every boundary vertex. Vertices not in the
/// boundary are either interior (e = d) or far away (e = 0), so e(y,S) is
/// always recoverable from one lookup in each dictionary.
///
/// Both dictionaries are ordered trees, so iteration order depends only on
/// the current contents. `map_ops()` counts the dictionary operations done by
/// add/remove; queries are const and uncounted so concurrent readers are safe.
class BoundarySet {
 public:
  explicit BoundarySet(const Graph& g) : graph_(&g) {}

  BoundarySet(const Graph& g, const VertexSet& initial) : graph_(&g) {
    g.check_set(initial);
    for (Vertex v : initial) add(v);
  }

  // The structure keeps a reference; temporaries would dangle.
  explicit BoundarySet(Graph&&) = delete;
  BoundarySet(Graph&&, const VertexSet&) = delete;

  const Graph& graph() const { return *graph_; }

  bool contains(Vertex y) const {
    graph_->check_vertex(y);
    return members_.count(y) != 0;
  }

  /// e(y,S).
  std::uint64_t edges_to_set(Vertex y) const {
    graph_->check_vertex(y);
    if (auto it = boundary_.find(y); it != boundary_.end()) return it->second;
    return members_.count(y) != 0 ? graph_->degree(y) : 0;
  }

  WalkProb walk_prob_parts(Vertex y) const {
    const std::uint64_t d = graph_->degree(y);
    const std::uint64_t e = edges_to_set(y);
    return {e + (contains(y) ? d : 0), 2 * d};
  }

  Rational walk_prob(Vertex y) const {
    const auto p = walk_prob_parts(y);
    return Rational(BigInt(p.num), BigInt(p.den));
  }

  void add(Vertex y) {
    graph_->check_vertex(y);
    ++ops_;
    if (!members_.insert(y).second) throw std::logic_error("add: vertex " + std::to_string(y) + " already in set");
    const std::uint64_t e = lookup_boundary(y, false);
    const std::uint64_t d = graph_->degree(y);
    volume_ += d;
    cut_ = cut_ + d - 2 * e;
    refresh(y, e, true);
    for (Vertex z : graph_->neighbors(y)) {
      ++ops_;
      const bool z_in = members_.count(z) != 0;
      const std::uint64_t ez = lookup_boundary(z, z_in);
      refresh(z, ez + 1, z_in);
    }
  }

  void remove(Vertex y) {
    graph_->check_vertex(y);
    ++ops_;
    if (members_.erase(y) == 0) throw std::logic_error("remove: vertex " + std::to_string(y) + " not in set");
    const std::uint64_t e = lookup_boundary(y, true);
    const std::uint64_t d = graph_->degree(y);
    volume_ -= d;
    cut_ = cut_ + 2 * e - d;
    refresh(y, e, false);
    for (Vertex z : graph_->neighbors(y)) {
      ++ops_;
      const bool z_in = members_.count(z) != 0;
      const std::uint64_t ez = lookup_boundary(z, z_in);
      refresh(z, ez - 1, z_in);
    }
  }

  /// Boundary vertices with their e(y,S), in increasing vertex order.
  const std::map<Vertex, std::uint64_t>& boundary() const { return boundary_; }

  std::vector<Vertex> boundary_vertices() const {
    std::vector<Vertex> out;
    out.reserve(boundary_.size());
    for (const auto& [y, e] : boundary_) out.push_back(y);
    return out;
  }

  VertexSet members() const { return VertexSet::from_sorted({members_.begin(), members_.end()}); }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  Volume volume() const { return volume_; }
  Volume cut() const { return cut_; }

  std::uint64_t map_ops() const { return ops_; }
  void reset_map_ops() { ops_ = 0; }

  nlohmann::ordered_json debug_dump() const {
    nlohmann::ordered_json j;
    j["members"] = std::vector<Vertex>(members_.begin(), members_.end());
    auto b = nlohmann::ordered_json::array();
    for (const auto& [y, e] : boundary_) b.push_back({y, e});
    j["boundary"] = b;
    j["volume"] = volume_;
    j["cut"] = cut_;
    return j;
  }

 private:
  /// e(y,S) given membership of y, counting one lookup.
  std::uint64_t lookup_boundary(Vertex y, bool y_in) {
    ++ops_;
    if (auto it = boundary_.find(y); it != boundary_.end()) return it->second;
    return y_in ? graph_->degree(y) : 0;
  }

  void refresh(Vertex z, std::uint64_t e, bool z_in) {
    ++ops_;
    const bool on_boundary = z_in ? e < graph_->degree(z) : e > 0;
    if (on_boundary)
      boundary_.insert_or_assign(z, e);
    else
      boundary_.erase(z);
  }

  const Graph* graph_;
  std::set<Vertex> members_;
  std::map<Vertex, std::uint64_t> boundary_;
  Volume volume_ = 0;
  Volume cut_ = 0;
  std::uint64_t ops_ = 0;
};

}  // namespace evocut
