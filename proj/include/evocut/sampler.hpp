#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evocut/boundary_set.hpp"
#include "evocut/graph.hpp"
#include "evocut/random.hpp"
#include "evocut/rational.hpp"

namespace evocut {

/// sqrt(4 ln(vol(V)) / T), the conductance level below which a sample path stops.
inline double theta(std::uint64_t steps, Volume total_volume) {
  if (steps == 0) throw std::invalid_argument("theta: step count must be at least 1");
  if (total_volume < 2) throw std::invalid_argument("theta: total volume must be at least 2");
  return std::sqrt(4.0 * std::log(static_cast<double>(total_volume)) / static_cast<double>(steps));
}

/// Path cost limit. Default-constructed budgets are unbounded.
class Budget {
 public:
  Budget() = default;
  static Budget unbounded() { return {}; }
  static Budget of(std::uint64_t limit) {
    Budget b;
    b.limit_ = limit;
    return b;
  }
  bool bounded() const { return limit_.has_value(); }
  std::uint64_t limit() const { return limit_.value(); }
  bool exceeded_by(std::uint64_t cost) const { return limit_ && cost > *limit_; }
  /// min(B, cost), with an unbounded B acting as +infinity.
  std::uint64_t cap(std::uint64_t cost) const { return limit_ ? std::min(*limit_, cost) : cost; }
  std::string to_string() const { return limit_ ? std::to_string(*limit_) : "inf"; }

 private:
  std::optional<std::uint64_t> limit_;
};

enum class StopReason { ConductanceBelowTheta, TimeLimit, BudgetExceeded, TrivialT0 };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::ConductanceBelowTheta: return "ConductanceBelowTheta";
    case StopReason::TimeLimit: return "TimeLimit";
    case StopReason::BudgetExceeded: return "BudgetExceeded";
    case StopReason::TrivialT0: return "TrivialT0";
  }
  return "?";
}

/// Threshold Z = (W / 2^53) * p(X_{t+1}, S) with W in [1, 2^53], held
/// exactly so that p(y,S) >= Z is decided in integer arithmetic.
struct Threshold {
  std::uint64_t weight;
  WalkProb scale;

  static constexpr std::uint64_t kOne = std::uint64_t{1} << 53;

  /// p >= Z  <=>  p.num * scale.den * 2^53 >= W * scale.num * p.den.
  /// Every factor is below 2^34 except 2^53, so the products fit in 128 bits.
  bool admits(WalkProb p) const {
    using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(p.num) * scale.den * kOne;
    const u128 rhs = static_cast<u128>(weight) * scale.num * p.den;
    return lhs >= rhs;
  }

  double value() const {
    return static_cast<double>(weight) * 0x1.0p-53 * static_cast<double>(scale.num) /
           static_cast<double>(scale.den);
  }
};

/// Joint state (X_t, S_t) of the walk/set coupling. X_t is always in S_t.
class CoupledState {
 public:
  CoupledState(Graph&&, Vertex) = delete;
  CoupledState(const Graph& g, Vertex start) : set_(g), walker_(start) {
    g.check_vertex(start);
    set_.add(start);
  }

  Vertex walk_position() const { return walker_; }
  const BoundarySet& set() const { return set_; }
  const Graph& graph() const { return set_.graph(); }

 private:
  friend class CoupledStepper;
  BoundarySet set_;
  Vertex walker_;
};

/// Stage-1 result: the vertices whose membership flips, S_t = S_{t-1} xor diff.
struct StepPlan {
  std::vector<Vertex> diff;
  Volume added_volume = 0;
  Volume removed_volume = 0;
  std::size_t boundary_scanned = 0;
  Threshold threshold{};
  std::uint64_t ops = 0;

  Volume diff_volume() const { return added_volume + removed_volume; }
};

/// The two stages of one coupled step. Random draws per step, in order:
///   1. one 64-bit word: top bit decides hold (0) or move (1);
///   2. if moving, a uniform neighbor index via Rng::below(d);
///   3. 53 bits U, giving Z = (1 - U/2^53) * p(X_{t+1}, S_{t-1}).
class CoupledStepper {
 public:
  /// Stage 1: moves the walker and selects the next set without touching S.
  /// Costs O(1) + O(|delta(S)|) operations.
  static StepPlan select(CoupledState& state, Rng& rng) {
    const Graph& g = state.graph();
    StepPlan plan;
    if (rng.coin()) state.walker_ = random_neighbor(g, state.walker_, rng);
    plan.ops += 1;

    const WalkProb px = state.set_.walk_prob_parts(state.walker_);
    plan.ops += 2;
    plan.threshold = Threshold{Threshold::kOne - rng.bits53(), px};

    for (const auto& [y, e] : state.set_.boundary()) {
      const bool in = state.set_.contains(y);
      const std::uint64_t d = g.degree(y);
      const bool next_in = plan.threshold.admits(WalkProb{e + (in ? d : 0), 2 * d});
      if (next_in != in) {
        plan.diff.push_back(y);
        (in ? plan.removed_volume : plan.added_volume) += d;
      }
      ++plan.boundary_scanned;
    }
    plan.ops += 2 * plan.boundary_scanned;
    return plan;
  }

  /// Stage 2: S <- S xor diff. Costs O(1) + O(vol(diff)) dictionary operations.
  static std::uint64_t apply(CoupledState& state, const StepPlan& plan) {
    const std::uint64_t before = state.set_.map_ops();
    for (Vertex y : plan.diff) {
      if (state.set_.contains(y))
        state.set_.remove(y);
      else
        state.set_.add(y);
    }
    return 1 + plan.diff.size() + (state.set_.map_ops() - before);
  }
};

struct StepOutcome {
  std::vector<Vertex> diff;
  std::size_t boundary_scanned = 0;
};

/// One full transition (X_t, S_t) -> (X_{t+1}, S_{t+1}).
inline StepOutcome coupled_step(CoupledState& state, Rng& rng) {
  StepPlan plan = CoupledStepper::select(state, rng);
  CoupledStepper::apply(state, plan);
  return {std::move(plan.diff), plan.boundary_scanned};
}

struct PathStats {
  std::uint64_t tau = 0;
  StopReason stop_reason = StopReason::TimeLimit;
  /// c_0 = vol(S_0), c_j = vol(S_j xor S_{j-1}) + cut(S_{j-1}).
  std::vector<std::uint64_t> step_costs;
  std::uint64_t total_cost = 0;
  /// vol(S_0), ..., vol(S_tau).
  std::vector<Volume> set_volumes;
  /// cut(S_0), ..., cut(S_{tau-1}).
  std::vector<Volume> set_cuts;
  Rational final_conductance = 0;
  /// Dictionary operations, neighbor samples and boundary visits. Building
  /// the returned vertex list is output, not counted.
  std::uint64_t work_ops = 0;
  /// Per-step flipped vertices; filled only when recording is requested.
  std::vector<std::vector<Vertex>> diffs;

  /// sum_{j < tau} phi(S_j)^2.
  double conductance_square_sum() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < set_cuts.size(); ++j) {
      const double phi = static_cast<double>(set_cuts[j]) / static_cast<double>(set_volumes[j]);
      sum += phi * phi;
    }
    return sum;
  }
};

struct CutResult {
  VertexSet set;
  Rational conductance = 0;
  Volume volume = 0;
  PathStats stats;
  std::uint64_t rng_seed = 0;
  /// Step limit used; 0 for the trivial EvoCut branch.
  std::uint64_t steps = 0;
};

struct SampleOptions {
  bool record_diffs = false;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("path cost overflows 64 bits");
  return out;
}

inline void finish(const Graph& g, CutResult& result) {
  result.volume = volume(g, result.set);
  result.conductance = conductance(g, result.set);
  result.stats.final_conductance = result.conductance;
}

}  // namespace detail

/// Simulates the volume-biased ESP from {x} through the walk/set coupling
/// and stops at the first t >= 1 with phi(S_t) < theta_T, t = T, or
/// cost(S_0..S_t) > B. The last two are checked right after stage 1, in
/// which case S_t = S_{t-1} xor D is returned without updating the structure.
inline CutResult generate_sample(const Graph& g, Vertex x, std::uint64_t steps, Budget budget,
                                 Rng& rng, SampleOptions options = {}) {
  g.check_vertex(x);
  if (steps == 0) throw std::invalid_argument("generate_sample: T must be at least 1");
  const double level = theta(steps, g.total_volume());

  CutResult result;
  result.rng_seed = rng.seed();
  result.steps = steps;
  PathStats& stats = result.stats;

  CoupledState state(g, x);
  stats.work_ops = state.set().map_ops();
  stats.total_cost = g.degree(x);
  stats.step_costs.push_back(stats.total_cost);
  stats.set_volumes.push_back(state.set().volume());

  for (std::uint64_t t = 1;; ++t) {
    const Volume cut_prev = state.set().cut();
    const Volume vol_prev = state.set().volume();
    stats.set_cuts.push_back(cut_prev);

    StepPlan plan = CoupledStepper::select(state, rng);
    stats.work_ops += plan.ops;
    const std::uint64_t step_cost = detail::checked_add(plan.diff_volume(), cut_prev);
    stats.total_cost = detail::checked_add(stats.total_cost, step_cost);
    stats.step_costs.push_back(step_cost);
    stats.set_volumes.push_back(vol_prev + plan.added_volume - plan.removed_volume);
    if (options.record_diffs) stats.diffs.push_back(plan.diff);
    stats.tau = t;

    const bool over_budget = budget.exceeded_by(stats.total_cost);
    if (over_budget || t == steps) {
      stats.stop_reason = over_budget ? StopReason::BudgetExceeded : StopReason::TimeLimit;
      std::vector<Vertex> diff = plan.diff;
      std::sort(diff.begin(), diff.end());
      result.set = state.set().members().symmetric_difference(VertexSet::from_sorted(std::move(diff)));
      break;
    }

    stats.work_ops += CoupledStepper::apply(state, plan);
    const double phi = static_cast<double>(state.set().cut()) / static_cast<double>(state.set().volume());
    if (phi < level) {
      stats.stop_reason = StopReason::ConductanceBelowTheta;
      result.set = state.set().members();
      break;
    }
  }
  detail::finish(g, result);
  return result;
}

inline CutResult generate_sample(const Graph& g, Vertex x, std::uint64_t steps, Budget budget,
                                 std::uint64_t seed, SampleOptions options = {}) {
  Rng rng(seed);
  return generate_sample(g, x, steps, budget, rng, options);
}

/// floor((1/phi)/100).
inline std::uint64_t evocut_steps(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0,1)");
  return static_cast<std::uint64_t>(std::floor((1.0 / phi) / 100.0));
}

/// Local cut around v for target conductance phi. With T = 0 the answer is {v}.
inline CutResult evo_cut(const Graph& g, Vertex v, double phi, Rng& rng, SampleOptions options = {}) {
  g.check_vertex(v);
  const std::uint64_t steps = evocut_steps(phi);
  if (steps == 0) {
    CutResult result;
    result.rng_seed = rng.seed();
    result.set = VertexSet{v};
    result.stats.tau = 0;
    result.stats.stop_reason = StopReason::TrivialT0;
    result.stats.total_cost = g.degree(v);
    result.stats.step_costs = {g.degree(v)};
    result.stats.set_volumes = {g.degree(v)};
    detail::finish(g, result);
    return result;
  }
  return generate_sample(g, v, steps, Budget::unbounded(), rng, options);
}

}  // namespace evocut
