#pragma once

#include <string>
#include <utility>
#include <vector>

#include "evocut/graph.hpp"
#include "evocut/random.hpp"

// Small graphs shared by the unit and acceptance suites.
namespace evocut::corpus {

struct NamedGraph {
  std::string name;
  Graph graph;
  /// A set used by the containment and good-set checks.
  VertexSet probe;
};

inline Graph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

inline Graph k3() { return complete(3); }
inline Graph k4() { return complete(4); }
inline Graph c4() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }
inline Graph p4() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}}); }
inline Graph p2() { return Graph(2, {{0, 1}}); }
inline Graph star3() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}}); }

/// Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline Graph dumbbell6() { return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

/// K4 on {0..3} and K4 on {4..7} joined by the bridge 3-4.
inline Graph dumbbell_k4() {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex base : {0u, 4u})
    for (Vertex u = 0; u < 4; ++u)
      for (Vertex v = u + 1; v < 4; ++v) e.emplace_back(base + u, base + v);
  e.emplace_back(3, 4);
  return Graph(8, e);
}

/// Two communities {0..k-1} and {k..2k-1}; each intra pair is an edge with
/// probability p, plus `cross` distinct random edges between them.
inline Graph two_community(std::uint64_t seed = 2024, Vertex k = 100, double p = 0.15, std::size_t cross = 20) {
  Rng rng(seed);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex base : {Vertex{0}, k})
    for (Vertex u = 0; u < k; ++u)
      for (Vertex v = u + 1; v < k; ++v)
        if (rng.uniform() < p) e.emplace_back(base + u, base + v);
  std::vector<std::pair<Vertex, Vertex>> bridges;
  while (bridges.size() < cross) {
    std::pair<Vertex, Vertex> b{static_cast<Vertex>(rng.below(k)), static_cast<Vertex>(k + rng.below(k))};
    bool seen = false;
    for (auto& x : bridges) seen = seen || x == b;
    if (!seen) bridges.push_back(b);
  }
  e.insert(e.end(), bridges.begin(), bridges.end());
  return Graph(2 * static_cast<std::size_t>(k), e);
}

inline VertexSet first_community(Vertex k = 100) {
  std::vector<Vertex> ids(k);
  for (Vertex v = 0; v < k; ++v) ids[v] = v;
  return VertexSet::from_sorted(std::move(ids));
}

/// The full acceptance corpus.
inline std::vector<NamedGraph> all() {
  return {
      {"K3", k3(), VertexSet{0}},
      {"C4", c4(), VertexSet{0, 1}},
      {"P4", p4(), VertexSet{0, 1}},
      {"K4", k4(), VertexSet{0, 1}},
      {"star3", star3(), VertexSet{1}},
      {"dumbbell6", dumbbell6(), VertexSet{0, 1, 2}},
      {"dumbbell_k4", dumbbell_k4(), VertexSet{0, 1, 2, 3}},
      {"two_community", two_community(), first_community()},
  };
}

/// Corpus graphs small enough for exhaustive subset sweeps (n <= 10).
inline std::vector<NamedGraph> small() {
  auto out = all();
  std::erase_if(out, [](const NamedGraph& g) { return g.graph.vertex_count() > 10; });
  return out;
}

}  // namespace evocut::corpus
