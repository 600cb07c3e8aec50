#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evocut/graph.hpp"
#include "evocut/random.hpp"
#include "evocut/sampler.hpp"

namespace evocut {

/// Constants of one nibble for target conductance phi on a graph of volume
/// vol(V).
struct NibbleConfig {
  double phi = 0.0;
  Volume total_volume = 0;
  std::uint64_t steps = 0;  // T = floor((1/phi)/100)
  /// theta_T; +infinity when T = 0.
  double theta = std::numeric_limits<double>::infinity();
  double gamma = 1.0;          // 1 + 4 sqrt(T ln vol(V))
  std::uint32_t max_budget_index = 0;  // ceil(log2 vol(V))
  double sigma = 1.0;          // 1 / (2 - 2^-j_max)

  static NibbleConfig make(double phi, Volume total_volume) {
    NibbleConfig c;
    c.phi = phi;
    c.total_volume = total_volume;
    c.steps = evocut_steps(phi);
    if (c.steps > 0) c.theta = evocut::theta(c.steps, total_volume);
    c.gamma = 1.0 + 4.0 * std::sqrt(static_cast<double>(c.steps) *
                                    std::log(static_cast<double>(total_volume)));
    // ceil(log2 x) for x >= 1 is the bit width of x - 1.
    c.max_budget_index = static_cast<std::uint32_t>(std::bit_width(total_volume - 1));
    c.sigma = 1.0 / (2.0 - std::ldexp(1.0, -static_cast<int>(c.max_budget_index)));
    return c;
  }

  /// B_j = 8 gamma 2^j, rounded down (costs are integers, so cost > B_j is
  /// unchanged by the rounding).
  std::uint64_t budget(std::uint32_t j) const {
    return static_cast<std::uint64_t>(std::floor(8.0 * gamma * std::ldexp(1.0, static_cast<int>(j))));
  }
};

/// Start vertex drawn with probability d(x)/vol(V), in O(log n).
inline Vertex sample_start_vertex(const Graph& g, Rng& rng) {
  if (g.vertex_count() == 0) throw std::invalid_argument("sample_start_vertex: empty graph");
  return g.vertex_at_volume(rng.below(g.total_volume()));
}

/// J in [0, j_max] with P(J = j) = sigma 2^-j, drawn exactly: the weights
/// are 2^(j_max - j) out of 2^(j_max + 1) - 1.
inline std::uint32_t sample_budget_index(std::uint32_t max_index, Rng& rng) {
  if (max_index > 62) throw std::invalid_argument("sample_budget_index: j_max above 62");
  const std::uint64_t total = (std::uint64_t{1} << (max_index + 1)) - 1;
  std::uint64_t r = rng.below(total);
  for (std::uint32_t j = 0; j < max_index; ++j) {
    const std::uint64_t w = std::uint64_t{1} << (max_index - j);
    if (r < w) return j;
    r -= w;
  }
  return max_index;
}

struct NibbleOutcome {
  /// Empty when rejected.
  VertexSet set;
  bool accepted = false;
  Vertex start = 0;
  std::uint32_t budget_index = 0;
  std::uint64_t budget = 0;
  NibbleConfig config;
  /// The sampled set before the acceptance filter.
  CutResult sample;
};

/// One randomized nibble: degree-weighted start, geometric budget, one
/// sample path, then keep the set only if phi(S) <= 3 theta_T and
/// vol(S) <= (3/4) vol(V). With T = 0 the sample path is S_0 = {start}.
/// Draw order: start vertex, budget index, sample path.
inline NibbleOutcome evo_nibble_detailed(const Graph& g, double phi, Rng& rng) {
  NibbleOutcome out;
  out.config = NibbleConfig::make(phi, g.total_volume());
  out.start = sample_start_vertex(g, rng);
  out.budget_index = sample_budget_index(out.config.max_budget_index, rng);
  out.budget = out.config.budget(out.budget_index);

  if (out.config.steps == 0) {
    out.sample = evo_cut(g, out.start, phi, rng);
  } else {
    out.sample = generate_sample(g, out.start, out.config.steps, Budget::of(out.budget), rng);
  }
  const bool sparse = to_double(out.sample.conductance) <= 3.0 * out.config.theta;
  const bool small = 4 * out.sample.volume <= 3 * g.total_volume();
  out.accepted = sparse && small;
  if (out.accepted) out.set = out.sample.set;
  return out;
}

inline VertexSet evo_nibble(const Graph& g, double phi, Rng& rng) {
  return evo_nibble_detailed(g, phi, rng).set;
}

struct PartitionOptions {
  /// Nibble calls; defaults to 40 vol(V).
  std::optional<std::uint64_t> iterations;
  double stop_fraction = 0.25;
};

struct PartitionRound {
  std::uint64_t iteration = 0;
  VertexSet set;  // original vertex ids
  Volume residual_volume_before = 0;
  Volume residual_volume_after = 0;
  /// theta_T as computed from the residual graph's volume.
  double theta = 0.0;
  /// Vertices left isolated by this removal, dropped from the residual.
  VertexSet dropped;
};

struct PartitionResult {
  VertexSet cut_set;
  std::vector<PartitionRound> rounds;
  Volume removed_volume = 0;
  /// phi(cut_set) in the input graph; 0 when nothing was removed.
  Rational original_conductance = 0;
  std::uint64_t total_work = 0;
  std::uint64_t iterations_run = 0;
  /// vol(cut_set) <= (7/8) vol(V).
  bool within_seven_eighths = true;
};

/// Repeatedly nibbles the residual graph and removes what it finds, until
/// the removed volume reaches stop_fraction * vol(V) or the iteration budget
/// runs out. Quality is measured in the input graph.
inline PartitionResult evo_partition(const Graph& g, double phi, PartitionOptions options, Rng& rng) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0,1)");
  if (!(options.stop_fraction > 0.0 && options.stop_fraction < 1.0))
    throw std::invalid_argument("stop_fraction must lie in (0,1)");
  const std::uint64_t iterations = options.iterations.value_or(40 * g.total_volume());
  const double stop_volume = options.stop_fraction * static_cast<double>(g.total_volume());

  PartitionResult result;
  VertexSet remaining = VertexSet::all(g.vertex_count());
  InducedSubgraph residual = induced_subgraph(g, remaining);

  for (std::uint64_t it = 0; it < iterations; ++it) {
    if (static_cast<double>(result.removed_volume) >= stop_volume || residual.empty()) break;
    ++result.iterations_run;
    const NibbleOutcome nib = evo_nibble_detailed(residual.graph, phi, rng);
    result.total_work += nib.sample.stats.work_ops;
    if (!nib.accepted) continue;

    std::vector<Vertex> parent_ids;
    parent_ids.reserve(nib.set.size());
    for (Vertex v : nib.set) parent_ids.push_back(residual.to_parent[v]);
    VertexSet piece = VertexSet::from_sorted(std::move(parent_ids));

    PartitionRound round;
    round.iteration = it;
    round.residual_volume_before = residual.graph.total_volume();
    round.theta = nib.config.theta;
    remaining = remaining.difference(piece);
    residual = induced_subgraph(g, remaining);
    remaining = remaining.difference(residual.dropped);
    round.dropped = residual.dropped;
    round.residual_volume_after = residual.empty() ? 0 : residual.graph.total_volume();
    round.set = piece;

    result.cut_set = result.cut_set.set_union(piece);
    result.removed_volume = volume(g, result.cut_set);
    result.rounds.push_back(std::move(round));
  }
  if (!result.cut_set.empty()) result.original_conductance = conductance(g, result.cut_set);
  result.within_seven_eighths = 8 * result.removed_volume <= 7 * g.total_volume();
  return result;
}

}  // namespace evocut
