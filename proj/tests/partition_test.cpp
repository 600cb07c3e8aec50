#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "evocut/partition.hpp"

namespace evocut {
namespace {

TEST(NibbleConfigTest, DerivedConstants) {
  const NibbleConfig c = NibbleConfig::make(0.001, 14);
  EXPECT_EQ(c.steps, 10u);
  EXPECT_DOUBLE_EQ(c.theta, std::sqrt(4.0 * std::log(14.0) / 10.0));
  EXPECT_DOUBLE_EQ(c.gamma, 1.0 + 4.0 * std::sqrt(10.0 * std::log(14.0)));
  EXPECT_EQ(c.max_budget_index, 4u);  // ceil(log2 14)
  EXPECT_DOUBLE_EQ(c.sigma, 16.0 / 31.0);
  EXPECT_EQ(c.budget(0), static_cast<std::uint64_t>(std::floor(8.0 * c.gamma)));
  EXPECT_EQ(c.budget(3), static_cast<std::uint64_t>(std::floor(64.0 * c.gamma)));

  EXPECT_EQ(NibbleConfig::make(0.5, 16).max_budget_index, 4u);
  EXPECT_EQ(NibbleConfig::make(0.5, 17).max_budget_index, 5u);
  const NibbleConfig trivial = NibbleConfig::make(0.5, 14);
  EXPECT_EQ(trivial.steps, 0u);
  EXPECT_TRUE(std::isinf(trivial.theta));
  EXPECT_DOUBLE_EQ(trivial.gamma, 1.0);
  EXPECT_THROW(NibbleConfig::make(0.0, 14), std::invalid_argument);
}

TEST(SampleStartVertexTest, StarCenterHasHalfTheMass) {
  const Graph star = corpus::star3();
  Rng rng(1);
  const int draws = 100000;
  int center = 0;
  for (int i = 0; i < draws; ++i) center += sample_start_vertex(star, rng) == 0;
  EXPECT_NEAR(center / double(draws), 0.5, 0.01);
}

TEST(SampleStartVertexTest, MatchesDegreeLaw) {
  const Graph g = corpus::dumbbell6();
  Rng rng(2);
  std::vector<double> freq(g.vertex_count(), 0.0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) freq[sample_start_vertex(g, rng)] += 1.0 / draws;
  double tv = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) tv += std::abs(freq[v] - g.degree(v) / double(g.total_volume()));
  EXPECT_LE(tv / 2, 0.01);
}

TEST(SampleBudgetIndexTest, ClosedFormLaw) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_budget_index(0, rng), 0u);
  for (std::uint32_t jmax : {1u, 4u, 10u}) {
    const double sigma = 1.0 / (2.0 - std::ldexp(1.0, -static_cast<int>(jmax)));
    std::vector<double> freq(jmax + 1, 0.0);
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
      const auto j = sample_budget_index(jmax, rng);
      ASSERT_LE(j, jmax);
      freq[j] += 1.0 / draws;
    }
    double tv = 0;
    for (std::uint32_t j = 0; j <= jmax; ++j) tv += std::abs(freq[j] - sigma * std::ldexp(1.0, -static_cast<int>(j)));
    EXPECT_LE(tv / 2, 0.01) << "jmax=" << jmax;
    if (jmax == 1) {
      EXPECT_NEAR(freq[0], 2.0 / 3.0, 0.01);
      EXPECT_NEAR(freq[1], 1.0 / 3.0, 0.01);
    }
  }
  EXPECT_THROW(sample_budget_index(63, rng), std::invalid_argument);
}

TEST(EvoNibbleTest, AcceptedSetsPassTheFilter) {
  Rng rng(4);
  for (const auto& [name, g, probe] : corpus::all()) {
    for (double phi : {0.5, 0.009, 0.001, 0.0001}) {
      const NibbleConfig c = NibbleConfig::make(phi, g.total_volume());
      for (int i = 0; i < 300; ++i) {
        const NibbleOutcome out = evo_nibble_detailed(g, phi, rng);
        EXPECT_EQ(out.accepted, !out.set.empty());
        if (!out.accepted) continue;
        ASSERT_LE(conductance_value(g, out.set), 3.0 * c.theta) << name;
        ASSERT_LE(4 * volume(g, out.set), 3 * g.total_volume()) << name;
        ASSERT_LE(out.budget_index, c.max_budget_index);
      }
    }
  }
  EXPECT_THROW(evo_nibble(corpus::k3(), 1.0, rng), std::invalid_argument);
}

TEST(EvoNibbleTest, TrivialStepCountReturnsStartVertex) {
  const Graph g = corpus::dumbbell6();
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const NibbleOutcome out = evo_nibble_detailed(g, 0.2, rng);
    EXPECT_TRUE(out.accepted);
    EXPECT_EQ(out.set, VertexSet{out.start});
    EXPECT_EQ(out.sample.stats.stop_reason, StopReason::TrivialT0);
  }
}

TEST(EvoNibbleTest, DumbbellOutputsConcentrateOnOneSide) {
  const Graph g = corpus::dumbbell_k4();
  const VertexSet left{0, 1, 2, 3};
  const VertexSet right{4, 5, 6, 7};
  Rng rng(6);
  int accepted = 0, concentrated = 0;
  for (int i = 0; i < 4000; ++i) {
    const VertexSet s = evo_nibble(g, 0.001, rng);
    if (s.empty()) continue;
    ++accepted;
    const Volume vol = volume(g, s);
    const Volume best = std::max(volume(g, s.intersection(left)), volume(g, s.intersection(right)));
    concentrated += 10 * best >= 9 * vol;
  }
  ASSERT_GT(accepted, 0);
  EXPECT_GT(2 * concentrated, accepted);
}

TEST(EvoPartitionTest, ZeroIterations) {
  Rng rng(7);
  const PartitionResult r = evo_partition(corpus::dumbbell_k4(), 0.001, {.iterations = 0}, rng);
  EXPECT_TRUE(r.cut_set.empty());
  EXPECT_TRUE(r.rounds.empty());
  EXPECT_EQ(r.removed_volume, 0u);
  EXPECT_EQ(r.iterations_run, 0u);
}

TEST(EvoPartitionTest, RejectsBadArguments) {
  Rng rng(8);
  const Graph g = corpus::k4();
  EXPECT_THROW(evo_partition(g, 0.0, {}, rng), std::invalid_argument);
  EXPECT_THROW(evo_partition(g, 0.1, {.iterations = std::nullopt, .stop_fraction = 0.0}, rng), std::invalid_argument);
  EXPECT_THROW(evo_partition(g, 0.1, {.iterations = std::nullopt, .stop_fraction = 1.0}, rng), std::invalid_argument);
}

TEST(EvoPartitionTest, RoundsAreDisjointAndReportedInOriginalGraph) {
  Rng rng(9);
  for (const auto& [name, g, probe] : corpus::all()) {
    for (double phi : {0.3, 0.005, 0.0005}) {
      for (int run = 0; run < 10; ++run) {
        const PartitionResult r = evo_partition(g, phi, {.iterations = 200}, rng);
        VertexSet seen;
        Volume previous = g.total_volume();
        for (const auto& round : r.rounds) {
          ASSERT_FALSE(round.set.empty()) << name;
          ASSERT_TRUE(seen.intersection(round.set).empty()) << name;
          ASSERT_TRUE(seen.intersection(round.dropped).empty()) << name;
          ASSERT_TRUE(round.set.intersection(round.dropped).empty()) << name;
          ASSERT_EQ(round.residual_volume_before, previous) << name;
          ASSERT_LT(round.residual_volume_after, round.residual_volume_before) << name;
          previous = round.residual_volume_after;
          seen = seen.set_union(round.set).set_union(round.dropped);
        }
        VertexSet uni;
        for (const auto& round : r.rounds) uni = uni.set_union(round.set);
        EXPECT_EQ(uni, r.cut_set) << name;
        EXPECT_EQ(r.removed_volume, volume(g, r.cut_set)) << name;
        if (!r.cut_set.empty()) {
          EXPECT_EQ(r.original_conductance, conductance(g, r.cut_set)) << name;
        }
        EXPECT_EQ(r.within_seven_eighths, 8 * r.removed_volume <= 7 * g.total_volume());
        EXPECT_LE(r.iterations_run, 200u);
      }
    }
  }
}

TEST(EvoPartitionTest, DumbbellFindsBalancedPiece) {
  const Graph g = corpus::dumbbell_k4();
  const VertexSet left{0, 1, 2, 3};
  Rng rng(10);
  int good = 0;
  const int runs = 200;
  for (int i = 0; i < runs; ++i) {
    const PartitionResult r = evo_partition(g, 0.001, {}, rng);
    const bool quarter = 4 * r.removed_volume >= g.total_volume();
    const bool community = r.cut_set == left || r.cut_set == left.complement(8);
    good += quarter || community;
  }
  EXPECT_GE(good, runs * 9 / 10);
}

}  // namespace
}  // namespace evocut
