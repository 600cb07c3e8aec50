#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "evocut/esp_reference.hpp"
#include "evocut/invariants.hpp"
#include "oracles.hpp"

namespace evocut::reference {
namespace {

std::map<VertexSet, Rational> as_map(const KernelDistribution& k) {
  std::map<VertexSet, Rational> out;
  for (const auto& e : k) {
    EXPECT_EQ(out.count(e.set), 0u) << "duplicate kernel entry";
    out[e.set] = e.prob;
  }
  return out;
}

TEST(EspStepTest, Examples) {
  const Graph k3 = corpus::k3();
  EXPECT_EQ(esp_step(k3, VertexSet{0}, 0.6), VertexSet{});
  EXPECT_EQ(esp_step(k3, VertexSet{0}, 0.3), VertexSet{0});
  EXPECT_EQ(esp_step(k3, VertexSet{0}, 0.2), VertexSet::all(3));
  // Boundary thresholds are inclusive.
  EXPECT_EQ(esp_step(k3, VertexSet{0}, 0.5), VertexSet{0});
  EXPECT_EQ(esp_step(k3, VertexSet{0}, 0.25), VertexSet::all(3));
  EXPECT_EQ(esp_step(k3, VertexSet::all(3), 1.0), VertexSet::all(3));
  EXPECT_THROW(esp_step(k3, VertexSet{0}, 0.0), std::invalid_argument);
  EXPECT_THROW(esp_step(k3, VertexSet{0}, 1.5), std::invalid_argument);
  EXPECT_THROW(esp_step(k3, VertexSet{7}, 0.5), std::out_of_range);
}

TEST(EspKernelTest, Examples) {
  const Graph k3 = corpus::k3();
  const Graph c4 = corpus::c4();
  using M = std::map<VertexSet, Rational>;
  EXPECT_EQ(as_map(esp_kernel(k3, VertexSet{0})),
            (M{{VertexSet{}, Rational(1, 2)}, {VertexSet{0}, Rational(1, 4)}, {VertexSet::all(3), Rational(1, 4)}}));
  EXPECT_EQ(as_map(esp_kernel(c4, VertexSet{0, 1})),
            (M{{VertexSet{}, Rational(1, 4)}, {VertexSet{0, 1}, Rational(1, 2)}, {VertexSet::all(4), Rational(1, 4)}}));
  EXPECT_EQ(as_map(esp_kernel(c4, VertexSet::all(4))), (M{{VertexSet::all(4), Rational(1)}}));

  EXPECT_EQ(as_map(vbesp_kernel(k3, VertexSet{0})),
            (M{{VertexSet{0}, Rational(1, 4)}, {VertexSet::all(3), Rational(3, 4)}}));
  EXPECT_EQ(as_map(vbesp_kernel(c4, VertexSet::all(4))), (M{{VertexSet::all(4), Rational(1)}}));
  EXPECT_EQ(as_map(vbesp_kernel(c4, VertexSet{0, 1})),
            (M{{VertexSet{0, 1}, Rational(1, 2)}, {VertexSet::all(4), Rational(1, 2)}}));
  EXPECT_THROW(vbesp_kernel(k3, VertexSet{}), std::invalid_argument);
}

TEST(EspKernelTest, MatchesBruteForceOracle) {
  for (const auto& [name, g, probe] : corpus::small()) {
    for_each_proper_subset(g, [&, &g = g, &name = name](const VertexSet& s) {
      ASSERT_EQ(as_map(esp_kernel(g, s)), oracle::esp_kernel(g, s)) << name;
    });
  }
}

TEST(EspKernelTest, ThresholdIntervalsAreNestedAndTile) {
  for (const auto& [name, g, probe] : corpus::small()) {
    for_each_proper_subset(g, [&, &g = g](const VertexSet& s) {
      const auto ivs = threshold_intervals(g, s);
      ASSERT_FALSE(ivs.empty());
      EXPECT_EQ(ivs.front().upper, 1);
      EXPECT_EQ(ivs.back().lower, 0);
      for (std::size_t i = 0; i < ivs.size(); ++i) {
        EXPECT_LT(ivs[i].lower, ivs[i].upper);
        if (i > 0) {
          EXPECT_EQ(ivs[i].upper, ivs[i - 1].lower);
          EXPECT_TRUE(ivs[i].set.includes(ivs[i - 1].set));
        }
      }
    });
  }
}

TEST(EspKernelTest, SizeCap) {
  const Graph g = corpus::two_community();
  EXPECT_THROW(esp_kernel(g, corpus::first_community()), std::length_error);
  EXPECT_NO_THROW(esp_kernel(g, corpus::first_community(), Limits{1000}));
}

TEST(GrowthGaugeTest, Examples) {
  EXPECT_NEAR(growth_gauge(corpus::k3(), VertexSet{0}), 1.0 - (0.25 + 0.25 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(growth_gauge(corpus::k3(), VertexSet{0}), 0.31699, 1e-5);
  EXPECT_NEAR(growth_gauge(corpus::c4(), VertexSet{0, 1}), 0.14645, 1e-5);
  EXPECT_DOUBLE_EQ(growth_gauge(corpus::c4(), VertexSet::all(4)), 0.0);
}

TEST(SplitExpectationTest, C4Example) {
  // vol 4, cut 2: halves are 6 and 2.
  const auto h = split_volume_expectation(corpus::c4(), VertexSet{0, 1});
  EXPECT_EQ(h.low_threshold, 6);
  EXPECT_EQ(h.high_threshold, 2);
}

TEST(WalkDistributionTest, Examples) {
  const Graph k3 = corpus::k3();
  EXPECT_EQ(walk_distribution(k3, 1, 0).probs, (std::vector<Rational>{0, 1, 0}));
  EXPECT_EQ(walk_distribution(k3, 0, 1).probs, (std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
  for (const auto& [name, g, probe] : corpus::small())
    for (std::size_t t : {1, 3, 7}) EXPECT_EQ(walk_distribution(g, 0, t).total(), 1) << name;
  EXPECT_THROW(walk_distribution(k3, 3, 1), std::out_of_range);
}

TEST(EscapeTest, Examples) {
  const Graph c4 = corpus::c4();
  EXPECT_EQ(escape_probability(c4, 0, VertexSet{0, 1}, 1), Rational(1, 4));
  EXPECT_EQ(escape_probability(c4, 0, VertexSet{0, 1}, 0), 0);
  EXPECT_EQ(escape_probability(c4, 2, VertexSet{0, 1}, 0), 1);
  for (std::size_t t : {0, 1, 5}) EXPECT_EQ(escape_probability(c4, 2, VertexSet::all(4), t), 0);
}

TEST(EscapeTest, ForwardAndBackwardAgreeAndGrowWithT) {
  for (const auto& [name, g, probe] : corpus::small()) {
    for_each_proper_subset(g, [&, &g = g, &name = name](const VertexSet& a) {
      Rational previous_sum = -1;
      for (std::size_t t = 0; t <= 4; ++t) {
        const auto all = escape_probabilities(g, a, t);
        Rational sum = 0;
        for (Vertex x = 0; x < g.vertex_count(); ++x) {
          ASSERT_EQ(all[x], escape_probability(g, x, a, t)) << name;
          sum += all[x];
        }
        EXPECT_GE(sum, previous_sum);
        previous_sum = sum;
      }
    });
  }
}

TEST(GoodSetTest, Examples) {
  const Graph c4 = corpus::c4();
  EXPECT_EQ(good_set(c4, VertexSet::all(4), 3), VertexSet::all(4));
  EXPECT_EQ(good_set(c4, VertexSet{0, 1}, 0), (VertexSet{0, 1}));
  EXPECT_THROW(good_set(c4, VertexSet{}, 1), std::invalid_argument);

  const Graph g = corpus::dumbbell_k4();
  const VertexSet a{0, 1, 2, 3};
  const VertexSet good = good_set(g, a, 2);
  EXPECT_GE(2 * volume(g, good), volume(g, a));
  // The bridge endpoint escapes fastest.
  EXPECT_TRUE(good.contains(0));
}

TEST(InvariantsTest, AllHoldOnSmallCorpus) {
  for (const auto& [name, g, probe] : corpus::small())
    for (const auto& check : verify_reference_invariants(g))
      EXPECT_TRUE(check.passed) << name << " " << check.name << ": " << check.detail;
  EXPECT_THROW(verify_reference_invariants(corpus::two_community()), std::length_error);
}

}  // namespace
}  // namespace evocut::reference
