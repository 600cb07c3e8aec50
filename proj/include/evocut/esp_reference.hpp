#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evocut/graph.hpp"
#include "evocut/rational.hpp"

/// Exact small-graph reference for the evolving set process (ESP) and its
/// volume-biased version. Everything here is a pure function of its inputs
/// and computed in exact rational arithmetic, except the growth gauge, which
/// needs square roots.
namespace evocut::reference {

struct Limits {
  /// One-step kernels have at most n+1 outcomes; this guards the O(n^2)
  /// exact enumeration, not a 2^n state space.
  std::size_t max_vertices = 20;
};

/// p(y,S) = (e(y,S)/d(y) + [y in S]) / 2, recomputed from scratch.
inline Rational walk_probability(const Graph& g, const VertexSet& s, Vertex y) {
  g.check_vertex(y);
  std::uint64_t e = 0;
  for (Vertex z : g.neighbors(y))
    if (s.contains(z)) ++e;
  const std::uint64_t d = g.degree(y);
  return Rational(BigInt(e + (s.contains(y) ? d : 0)), BigInt(2 * d));
}

/// {y : p(y,S) >= u} for a threshold u in (0,1]. The comparison is exact:
/// a double converts to cpp_rational without rounding.
inline VertexSet esp_step(const Graph& g, const VertexSet& s, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("esp_step: threshold must lie in (0,1]");
  g.check_set(s);
  const Rational threshold(u);
  std::vector<Vertex> out;
  for (Vertex y = 0; y < g.vertex_count(); ++y)
    if (walk_probability(g, s, y) >= threshold) out.push_back(y);
  return VertexSet::from_sorted(std::move(out));
}

struct KernelEntry {
  VertexSet set;
  Rational prob;
};

/// Exact finite distribution over next-step sets. Entries are listed from
/// the highest threshold interval to the lowest, so sets increase.
class KernelDistribution {
 public:
  KernelDistribution() = default;
  explicit KernelDistribution(std::vector<KernelEntry> entries) : entries_(std::move(entries)) {}

  const std::vector<KernelEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  Rational total() const {
    Rational sum = 0;
    for (const auto& e : entries_) sum += e.prob;
    return sum;
  }

  /// Probability of `set`; zero when it is not an outcome.
  Rational prob_of(const VertexSet& set) const {
    for (const auto& e : entries_)
      if (e.set == set) return e.prob;
    return 0;
  }

  Rational expectation(const std::function<Rational(const VertexSet&)>& f) const {
    Rational sum = 0;
    for (const auto& e : entries_) sum += e.prob * f(e.set);
    return sum;
  }

 private:
  std::vector<KernelEntry> entries_;
};

/// The next set is `set` exactly when the threshold lies in (lower, upper].
struct ThresholdInterval {
  Rational lower;
  Rational upper;
  VertexSet set;
};

/// Partition of (0,1] into maximal intervals on which the ESP step from `s`
/// is constant. Zero-length intervals are omitted.
inline std::vector<ThresholdInterval> threshold_intervals(const Graph& g, const VertexSet& s,
                                                          Limits limits = {}) {
  if (g.vertex_count() > limits.max_vertices)
    throw std::length_error("threshold enumeration limited to " +
                            std::to_string(limits.max_vertices) + " vertices");
  g.check_set(s);
  std::vector<std::pair<Rational, Vertex>> values;
  values.reserve(g.vertex_count());
  for (Vertex y = 0; y < g.vertex_count(); ++y) {
    auto p = walk_probability(g, s, y);
    if (p > 0) values.emplace_back(std::move(p), y);
  }
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });

  std::vector<ThresholdInterval> out;
  std::vector<Vertex> members;
  Rational upper = 1;
  std::size_t i = 0;
  while (true) {
    const Rational lower = i < values.size() ? values[i].first : Rational(0);
    if (lower < upper) {
      std::vector<Vertex> sorted = members;
      std::sort(sorted.begin(), sorted.end());
      out.push_back({lower, upper, VertexSet::from_sorted(std::move(sorted))});
    }
    if (i == values.size()) break;
    // Everyone sharing this p-value joins together.
    const Rational level = values[i].first;
    while (i < values.size() && values[i].first == level) members.push_back(values[i++].second);
    upper = level;
  }
  return out;
}

/// One-step ESP kernel K(S, .). Empty set and V are absorbing.
inline KernelDistribution esp_kernel(const Graph& g, const VertexSet& s, Limits limits = {}) {
  std::vector<KernelEntry> entries;
  for (auto& iv : threshold_intervals(g, s, limits))
    entries.push_back({std::move(iv.set), iv.upper - iv.lower});
  return KernelDistribution(std::move(entries));
}

/// Volume-biased kernel vol(S')/vol(S) * K(S,S'); the empty outcome is dropped.
inline KernelDistribution vbesp_kernel(const Graph& g, const VertexSet& s, Limits limits = {}) {
  if (s.empty()) throw std::invalid_argument("vbesp_kernel: start set must be nonempty");
  const Rational start_volume{BigInt(volume(g, s))};
  std::vector<KernelEntry> entries;
  for (auto& e : esp_kernel(g, s, limits)) {
    if (e.set.empty()) continue;
    Rational w = e.prob * Rational(BigInt(volume(g, e.set))) / start_volume;
    entries.push_back({e.set, std::move(w)});
  }
  return KernelDistribution(std::move(entries));
}

/// E[vol(S_1) | U <= 1/2] and E[vol(S_1) | U > 1/2] for one ESP step.
struct SplitVolumeExpectation {
  Rational low_threshold;
  Rational high_threshold;
};

inline SplitVolumeExpectation split_volume_expectation(const Graph& g, const VertexSet& s,
                                                       Limits limits = {}) {
  const Rational half(1, 2);
  SplitVolumeExpectation out{0, 0};
  for (const auto& iv : threshold_intervals(g, s, limits)) {
    const Rational vol{BigInt(volume(g, iv.set))};
    const Rational low_len = std::max(Rational(0), Rational(std::min(iv.upper, half) - iv.lower));
    const Rational high_len = std::max(Rational(0), Rational(iv.upper - std::max(iv.lower, half)));
    out.low_threshold += low_len * vol;
    out.high_threshold += high_len * vol;
  }
  // Each conditional event has probability 1/2.
  out.low_threshold *= 2;
  out.high_threshold *= 2;
  return out;
}

/// psi(S) = 1 - E sqrt(vol(S_1)/vol(S)) under the ESP kernel.
inline double growth_gauge(const Graph& g, const VertexSet& s, Limits limits = {}) {
  if (s.empty()) throw std::invalid_argument("growth_gauge: set must be nonempty");
  const double start_volume = static_cast<double>(volume(g, s));
  double expectation = 0.0;
  for (const auto& e : esp_kernel(g, s, limits))
    expectation += to_double(e.prob) * std::sqrt(static_cast<double>(volume(g, e.set)) / start_volume);
  return 1.0 - expectation;
}

struct WalkDistribution {
  std::vector<Rational> probs;
  Rational total() const {
    Rational sum = 0;
    for (const auto& p : probs) sum += p;
    return sum;
  }
};

namespace detail {

/// One lazy-walk step applied to a row vector.
inline std::vector<Rational> lazy_step(const Graph& g, const std::vector<Rational>& mass) {
  std::vector<Rational> next(g.vertex_count(), Rational(0));
  for (Vertex y = 0; y < g.vertex_count(); ++y) {
    if (mass[y] == 0) continue;
    const Rational half = mass[y] / 2;
    next[y] += half;
    const Rational share = half / Rational(BigInt(g.degree(y)));
    for (Vertex z : g.neighbors(y)) next[z] += share;
  }
  return next;
}

}  // namespace detail

/// p^t(x, .) for the lazy walk.
inline WalkDistribution walk_distribution(const Graph& g, Vertex x, std::size_t steps) {
  g.check_vertex(x);
  std::vector<Rational> mass(g.vertex_count(), Rational(0));
  mass[x] = 1;
  for (std::size_t t = 0; t < steps; ++t) mass = detail::lazy_step(g, mass);
  return {std::move(mass)};
}

/// Probability that the lazy walk from x visits V \ A at some time in [0, T].
/// Forward recursion on the mass that has stayed inside A.
inline Rational escape_probability(const Graph& g, Vertex x, const VertexSet& a, std::size_t steps) {
  g.check_vertex(x);
  g.check_set(a);
  if (!a.contains(x)) return 1;
  std::vector<Rational> mass(g.vertex_count(), Rational(0));
  mass[x] = 1;
  for (std::size_t t = 0; t < steps; ++t) {
    mass = detail::lazy_step(g, mass);
    for (Vertex y = 0; y < g.vertex_count(); ++y)
      if (!a.contains(y)) mass[y] = 0;
  }
  Rational stayed = 0;
  for (const auto& m : mass) stayed += m;
  return 1 - stayed;
}

/// Escape probabilities for every start vertex at once, by the backward
/// recursion stay_k(y) = [y in A] (stay_{k-1}(y)/2 + sum_z stay_{k-1}(z)/(2d(y))).
inline std::vector<Rational> escape_probabilities(const Graph& g, const VertexSet& a, std::size_t steps) {
  g.check_set(a);
  std::vector<Rational> stay(g.vertex_count(), Rational(0));
  for (Vertex y : a) stay[y] = 1;
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<Rational> next(g.vertex_count(), Rational(0));
    for (Vertex y : a) {
      Rational around = 0;
      for (Vertex z : g.neighbors(y)) around += stay[z];
      next[y] = stay[y] / 2 + around / Rational(BigInt(2 * g.degree(y)));
    }
    stay = std::move(next);
  }
  std::vector<Rational> esc(g.vertex_count());
  for (Vertex y = 0; y < g.vertex_count(); ++y) esc[y] = 1 - stay[y];
  return esc;
}

/// A_T = {x in A : esc(x,T,A) <= T * phi(A)}.
inline VertexSet good_set(const Graph& g, const VertexSet& a, std::size_t steps) {
  if (a.empty()) throw std::invalid_argument("good_set: set must be nonempty");
  const Rational limit = Rational(BigInt(steps)) * conductance(g, a);
  const auto esc = escape_probabilities(g, a, steps);
  std::vector<Vertex> out;
  for (Vertex x : a)
    if (esc[x] <= limit) out.push_back(x);
  return VertexSet::from_sorted(std::move(out));
}

}  // namespace evocut::reference
