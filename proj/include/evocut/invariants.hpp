#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "evocut/esp_reference.hpp"
#include "evocut/graph.hpp"

/// Exhaustive sweeps of the exact ESP identities over every nonempty proper
/// subset of a small graph.
namespace evocut::reference {

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::string detail;
};

inline VertexSet subset_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Vertex> ids;
  for (std::size_t v = 0; v < n; ++v)
    if (mask >> v & 1U) ids.push_back(static_cast<Vertex>(v));
  return VertexSet::from_sorted(std::move(ids));
}

/// Calls f(S) for every S with S nonempty and S != V.
template <typename F>
void for_each_proper_subset(const Graph& g, F&& f) {
  const std::size_t n = g.vertex_count();
  if (n >= 63) throw std::length_error("subset sweep needs fewer than 63 vertices");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) f(subset_from_mask(n, mask));
}

namespace detail {

inline void fail(InvariantCheck& c, const Graph& g, const VertexSet& s, const std::string& what) {
  if (!c.passed) return;
  c.passed = false;
  std::string ids;
  for (Vertex v : s) ids += (ids.empty() ? "" : ",") + std::to_string(g.label(v));
  c.detail = "S={" + ids + "}: " + what;
}

}  // namespace detail

inline std::vector<InvariantCheck> verify_reference_invariants(const Graph& g,
                                                               std::size_t max_vertices = 12) {
  if (g.vertex_count() > max_vertices)
    throw std::length_error("verify: exhaustive sweep limited to " + std::to_string(max_vertices) +
                            " vertices");
  auto named = [](std::string name) {
    InvariantCheck c;
    c.name = std::move(name);
    return c;
  };
  InvariantCheck martingale = named("martingale_volume");
  InvariantCheck split = named("split_threshold_expectation");
  InvariantCheck gauge = named("growth_gauge_lower_bound");
  InvariantCheck doob = named("volume_biased_transform");
  InvariantCheck nesting = named("threshold_nesting");
  InvariantCheck good = named("good_set_half_volume");
  double min_gauge_margin = std::numeric_limits<double>::infinity();

  const Rational half(1, 2);
  for_each_proper_subset(g, [&](const VertexSet& s) {
    const Rational vol{BigInt(volume(g, s))};
    const Rational cut{BigInt(boundary_edge_count(g, s))};
    const auto kernel = esp_kernel(g, s);
    auto vol_of = [&](const VertexSet& t) { return Rational(BigInt(volume(g, t))); };
    auto cut_of = [&](const VertexSet& t) { return Rational(BigInt(boundary_edge_count(g, t))); };

    ++martingale.checked;
    if (kernel.total() != 1 || kernel.expectation(vol_of) != vol)
      detail::fail(martingale, g, s, "sum K(S,S') vol(S') != vol(S)");

    ++split.checked;
    const auto halves = split_volume_expectation(g, s);
    if (halves.low_threshold != vol + cut || halves.high_threshold != vol - cut)
      detail::fail(split, g, s, "conditional expectations " + to_string(halves.low_threshold) + ", " +
                                    to_string(halves.high_threshold));

    ++gauge.checked;
    const double phi = to_double(cut / vol);
    const double margin = growth_gauge(g, s) - phi * phi / 8.0;
    min_gauge_margin = std::min(min_gauge_margin, margin);
    if (margin < -1e-12) detail::fail(gauge, g, s, "psi(S) < phi(S)^2/8 by " + std::to_string(-margin));

    ++doob.checked;
    const auto biased = vbesp_kernel(g, s);
    bool doob_ok = biased.total() == 1 && biased.prob_of(VertexSet{}) == 0;
    for (const auto& f : {std::function<Rational(const VertexSet&)>(vol_of),
                          std::function<Rational(const VertexSet&)>(cut_of),
                          std::function<Rational(const VertexSet&)>(
                              [&](const VertexSet& t) { return Rational(t.size() == g.vertex_count() ? 1 : 0); })}) {
      const Rational lhs = biased.expectation(f);
      const Rational rhs = kernel.expectation([&](const VertexSet& t) { return vol_of(t) / vol * f(t); });
      doob_ok = doob_ok && lhs == rhs;
    }
    if (!doob_ok) detail::fail(doob, g, s, "volume-biased kernel disagrees with reweighted ESP kernel");

    ++nesting.checked;
    for (const auto& iv : threshold_intervals(g, s)) {
      if (iv.lower < half && !iv.set.includes(s)) detail::fail(nesting, g, s, "u <= 1/2 shrank the set");
      if (iv.upper > half && !s.includes(iv.set)) detail::fail(nesting, g, s, "u > 1/2 grew the set");
    }

    for (std::size_t steps : {1, 2, 4}) {
      ++good.checked;
      if (2 * volume(g, good_set(g, s, steps)) < volume(g, s))
        detail::fail(good, g, s, "vol(A_T) < vol(A)/2 at T=" + std::to_string(steps));
    }
  });
  gauge.detail = gauge.passed ? "min margin " + std::to_string(min_gauge_margin) : gauge.detail;
  return {martingale, split, gauge, doob, nesting, good};
}

}  // namespace evocut::reference
