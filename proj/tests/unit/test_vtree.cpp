#include <gtest/gtest.h>

#include "fixtures.hpp"

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "vcantor/error.hpp"
#include "vcantor/vtree.hpp"

using namespace vcantor;

namespace {

VTree random_tree(const Catalog& c, std::size_t V, std::size_t depth, std::uint64_t seed) {
  Xoshiro256ss rng(seed);
  return build_tree(c, V, depth, std::nullopt, rng);
}

}  // namespace

TEST(SampleEnvironment, SingleTypeIsAlwaysNeck) {
  Xoshiro256ss rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(sample_environment(catalogs::cantor_and_fifths(), 1, rng).is_neck);
}

TEST(SampleEnvironment, NeckProbabilityByEnumeration) {
  EXPECT_DOUBLE_EQ(oracle::neck_probability(catalogs::cantor(), 2), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(oracle::neck_probability(catalogs::cantor(), 1), 1.0);
  // Two rows from {2, 3} maps with probability 1/2 each: 2 * (1/4 * 2^-4 + 1/2 * 2^-5 + 1/4 * 2^-6).
  EXPECT_NEAR(oracle::neck_probability(catalogs::cantor_and_fifths(), 2), 2.0 * (1.0 / 64 + 1.0 / 64 + 1.0 / 256),
              1e-15);
}

TEST(SampleEnvironment, NeckFrequencyMatchesEnumeration) {
  for (const auto& [catalog, V] : {std::pair{catalogs::cantor(), std::size_t{2}},
                                   std::pair{catalogs::cantor_and_fifths(), std::size_t{2}},
                                   std::pair{catalogs::cantor(), std::size_t{3}}}) {
    const double p = oracle::neck_probability(catalog, V);
    Xoshiro256ss rng(11 + V);
    constexpr int draws = 200'000;
    int necks = 0;
    for (int i = 0; i < draws; ++i) necks += sample_environment(catalog, V, rng).is_neck ? 1 : 0;
    const double freq = static_cast<double>(necks) / draws;
    EXPECT_NEAR(freq, p, 4.0 * std::sqrt(p * (1 - p) / draws)) << "V=" << V;
  }
}

TEST(SampleEnvironment, DeterministicForFixedSeed) {
  Xoshiro256ss a(42);
  Xoshiro256ss b(42);
  EXPECT_EQ(sample_environment(catalogs::cantor_and_fifths(), 3, a),
            sample_environment(catalogs::cantor_and_fifths(), 3, b));
}

TEST(SampleEnvironment, RowsMatchSystemSizes) {
  Xoshiro256ss rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto env = sample_environment(catalogs::cantor_and_fifths(), 3, rng);
    ASSERT_EQ(env.rows.size(), 3u);
    for (const auto& row : env.rows) {
      ASSERT_LT(row.system, 2u);
      EXPECT_EQ(row.child_types.size(), row.system == 0 ? 2u : 3u);
      for (auto t : row.child_types) EXPECT_LT(t, 3u);
    }
    EXPECT_EQ(env.is_neck, all_child_types_equal(env.rows));
  }
}

TEST(BuildTree, CantorGenerationSizes) {
  for (std::size_t V : {1u, 2u, 3u}) {
    const auto tree = random_tree(catalogs::cantor(), V, 10, V);
    for (std::size_t g = 0; g <= 10; ++g) EXPECT_EQ(tree.generation(g).size(), std::size_t{1} << g);
    EXPECT_EQ(tree.node_count(), (std::size_t{1} << 11) - 1);
  }
}

TEST(BuildTree, DepthZeroIsRoot) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 2, 0, 1);
  EXPECT_EQ(tree.depth(), 0u);
  ASSERT_EQ(tree.generation(0).size(), 1u);
  EXPECT_EQ(tree.node(0, 0).r, 1.0);
  EXPECT_EQ(tree.node(0, 0).m, 1.0);
  EXPECT_TRUE(tree.environments().empty());
  EXPECT_TRUE(tree.neck_levels().empty());
}

TEST(BuildTree, SingleTypeEveryLevelIsNeck) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 1, 7, 3);
  ASSERT_EQ(tree.neck_levels().size(), 7u);
  for (std::size_t l = 0; l < 7; ++l) EXPECT_EQ(tree.neck_levels()[l], l + 1);
}

TEST(BuildTree, NodeCapEnforced) {
  Xoshiro256ss rng(1);
  try {
    build_tree(catalogs::cantor(), 1, 20, std::nullopt, rng, TreeOptions{1000});
    FAIL() << "expected TreeTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TreeTooLarge);
  }
}

TEST(BuildTree, RejectsMalformedEnvironments) {
  Environment env;
  env.rows = {{0, {0, 1}}};
  EXPECT_THROW(VTree(catalogs::cantor(), 1, 0, {env}), Error);
  EXPECT_THROW(VTree(catalogs::cantor(), 2, 2, {}), Error);
  env.rows = {{1, {0, 0}}};
  EXPECT_THROW(VTree(catalogs::cantor(), 1, 0, {env}), Error);
}

TEST(BuildTree, ChildrenFollowEnvironment) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 3, 6, 77);
  const auto& cat = tree.catalog();
  for (std::size_t g = 0; g < tree.depth(); ++g) {
    const auto& env = tree.environments()[g];
    for (std::size_t i = 0; i < tree.generation(g).size(); ++i) {
      const auto& p = tree.node(g, i);
      const auto& row = env.rows[p.type];
      ASSERT_EQ(p.system, row.system);
      const auto& sys = cat.systems[row.system];
      const auto [lo, hi] = tree.descendant_range(g, i, g + 1);
      ASSERT_EQ(hi - lo, sys.size());
      for (std::size_t c = lo; c < hi; ++c) {
        const auto& ch = tree.node(g + 1, c);
        const std::size_t pos = c - lo;
        EXPECT_EQ(ch.parent, i);
        EXPECT_EQ(ch.child_position, pos);
        EXPECT_EQ(ch.type, row.child_types[pos]);
        EXPECT_EQ(ch.r, p.r * sys.maps[pos].ratio);
        EXPECT_EQ(ch.m, p.m * sys.weights[pos]);
        EXPECT_NEAR(ch.right - ch.left, ch.r * cat.base.length(), 1e-15);
        EXPECT_GE(ch.left, p.left - 1e-15);
        EXPECT_LE(ch.right, p.right + 1e-15);
      }
    }
  }
}

TEST(BuildTree, GenerationsOrderedLeftToRight) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 2, 8, 4);
  for (std::size_t g = 1; g <= tree.depth(); ++g) {
    const auto gen = tree.generation(g);
    for (std::size_t i = 1; i < gen.size(); ++i) EXPECT_LE(gen[i - 1].right, gen[i].left + 1e-15);
  }
}

TEST(NeckSubtree, NodesOnNeckLevelRootIdenticalSubtrees) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tree = random_tree(catalogs::cantor_and_fifths(), 2, 9, 100 + seed);
    for (std::size_t g : tree.neck_levels()) {
      const auto gen = tree.generation(g);
      const auto& u = gen.front();
      for (std::size_t w = 1; w < gen.size(); ++w) {
        ASSERT_EQ(gen[w].type, u.type);
        for (std::size_t t = g; t <= tree.depth(); ++t) {
          const auto [ulo, uhi] = tree.descendant_range(g, 0, t);
          const auto [wlo, whi] = tree.descendant_range(g, w, t);
          ASSERT_EQ(uhi - ulo, whi - wlo);
          for (std::size_t d = 0; d < uhi - ulo; ++d) {
            const auto& a = tree.node(t, ulo + d);
            const auto& b = tree.node(t, wlo + d);
            EXPECT_EQ(a.type, b.type);
            EXPECT_EQ(a.system, b.system);
            if (t > g) EXPECT_EQ(a.child_position, b.child_position);
            EXPECT_NEAR(a.r / u.r, b.r / gen[w].r, 1e-12 * a.r / u.r);
            EXPECT_NEAR(a.m / u.m, b.m / gen[w].m, 1e-12 * a.m / u.m);
          }
        }
      }
      // The materialized subtree repeats the same structure.
      const auto sub = tree.subtree(g, u.type);
      const auto [lo, hi] = tree.descendant_range(g, 0, tree.depth());
      ASSERT_EQ(sub.generation(sub.depth()).size(), hi - lo);
      for (std::size_t d = 0; d < hi - lo; ++d) {
        EXPECT_EQ(sub.node(sub.depth(), d).type, tree.node(tree.depth(), lo + d).type);
      }
    }
  }
}

TEST(CutSet, ZeroIsRoot) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 2, 4, 2);
  const auto cut = cut_set(tree, 0);
  ASSERT_EQ(cut.M, 1u);
  EXPECT_EQ(cut.members[0].generation, 0u);
  EXPECT_EQ(cut.T, 1.0);
}

TEST(CutSet, HomogeneousCantorIsFullGeneration) {
  const auto tree = random_tree(catalogs::cantor(), 1, 14, 0);
  for (std::size_t k = 1; k <= 20; ++k) {
    const auto l = static_cast<std::size_t>(std::ceil(static_cast<double>(k) / std::log(6.0)));
    const auto cut = cut_set(tree, k);
    EXPECT_EQ(cut.M, std::size_t{1} << l) << "k=" << k;
    for (const auto& m : cut.members) EXPECT_EQ(m.generation, l);
    EXPECT_NEAR(cut.T, std::pow(6.0, static_cast<double>(l)), 1e-9 * std::pow(6.0, static_cast<double>(l)));
    EXPECT_EQ(cut.y, 1u);
  }
}

TEST(CutSet, CoversEveryLeafOnce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t V = 1 + seed % 3;
    const auto tree = random_tree(catalogs::cantor_and_fifths(), V, V == 1 ? 8 : 10, seed);
    for (std::size_t k = 0;; ++k) {
      CutSet cut;
      try {
        cut = cut_set(tree, k);
      } catch (const DepthExhausted&) {
        break;
      }
      EXPECT_TRUE(covers_exactly_once(tree, cut)) << "seed " << seed << " k " << k;
      // Every node of the last generation, checked by walking parents.
      std::set<std::pair<std::size_t, std::size_t>> members;
      for (const auto& m : cut.members) members.insert({m.generation, m.index});
      std::vector<int> hits(tree.generation(tree.depth()).size(), 0);
      for (std::size_t i = 0; i < hits.size(); ++i) {
        std::size_t idx = i;
        for (std::size_t g = tree.depth();; --g) {
          if (members.count({g, idx}) > 0) ++hits[i];
          if (g == 0) break;
          idx = tree.node(g, idx).parent;
        }
      }
      for (int h : hits) ASSERT_EQ(h, 1);
    }
  }
}

TEST(CutSet, ChainHolds) {
  const auto eta = scale_extrema(catalogs::cantor_and_fifths()).eta;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tree = random_tree(catalogs::cantor_and_fifths(), 2, 11, 500 + seed);
    for (std::size_t k = 1;; ++k) {
      CutSet cut;
      try {
        cut = cut_set(tree, k);
      } catch (const DepthExhausted&) {
        break;
      }
      const double e = std::exp(-static_cast<double>(k));
      double mass = 0.0;
      double sum = 0.0;
      for (const auto& m : cut.members) {
        const auto& n = tree.node(m.generation, m.index);
        EXPECT_LE(n.rm(), e);
        EXPECT_GT(m.previous_product, e);
        EXPECT_GE(n.rm(), std::pow(eta, static_cast<double>(cut.y)) * e * (1 - 1e-12));
        mass += n.m;
        sum += n.rm();
      }
      EXPECT_NEAR(mass, 1.0, 1e-12);
      EXPECT_GE(cut.T, std::exp(static_cast<double>(k)) * (1 - 1e-12));
      EXPECT_DOUBLE_EQ(cut.T, static_cast<double>(cut.M) / sum);
    }
  }
}

TEST(CutSet, MembersSortedAndOnNeckLevels) {
  const auto tree = fixture::tree_reaching_cut(catalogs::cantor_and_fifths(), 2, 2, 9, 16).tree;
  const auto cut = cut_set(tree, 2);
  for (std::size_t i = 0; i < cut.members.size(); ++i) {
    const auto& m = cut.members[i];
    EXPECT_TRUE(std::find(tree.neck_levels().begin(), tree.neck_levels().end(), m.generation) !=
                tree.neck_levels().end());
    if (i > 0) {
      const auto& p = cut.members[i - 1];
      EXPECT_LT(tree.node(p.generation, p.index).left, tree.node(m.generation, m.index).left);
    }
  }
}

TEST(CutSet, DepthExhaustedCarriesHint) {
  const auto tree = random_tree(catalogs::cantor(), 1, 3, 0);
  try {
    cut_set(tree, 10);
    FAIL() << "expected DepthExhausted";
  } catch (const DepthExhausted& e) {
    // (1/6)^l <= e^-10 needs l = 6, three more than the depth.
    EXPECT_EQ(e.additional_depth(), 3u);
    EXPECT_EQ(e.kind(), ErrorKind::DepthExhausted);
  }
}

TEST(ScaleSum, CantorRootGivesUnitSums) {
  const auto tree = random_tree(catalogs::cantor(), 1, 10, 0);
  const double gamma = std::log(2.0) / std::log(6.0);
  for (std::size_t k = 0; k <= 10; ++k) {
    const auto s = scale_sum_at_neck(tree, gamma, k);
    EXPECT_NEAR(s.direct_sum, 1.0, 1e-12);
    EXPECT_NEAR(s.factorized_sum, 1.0, 1e-12);
  }
}

TEST(ScaleSum, SingleBlockIsDirectSum) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 1, 1, 3);
  const auto& sys = tree.catalog().systems[tree.environments()[0].rows[0].system];
  for (double x : {0.2, 0.5, 1.3}) {
    double expected = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) expected += std::pow(sys.maps[i].ratio * sys.weights[i], x);
    const auto s = scale_sum_at_neck(tree, x, 1);
    EXPECT_NEAR(s.direct_sum, expected, 1e-15);
    EXPECT_NEAR(s.factorized_sum, expected, 1e-14);
  }
}

TEST(ScaleSum, FactorizationMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t V = 1 + seed % 3;
    const auto tree = random_tree(catalogs::cantor_and_fifths(), V, V == 1 ? 8 : 12, 900 + seed);
    const std::size_t k = tree.neck_levels().size();
    for (double x : {0.1, 0.4, 0.9}) {
      const auto s = scale_sum_at_neck(tree, x, k);
      const double level = k == 0 ? 0 : tree.neck_levels()[k - 1];
      const double brute = oracle::brute_force_scale_sum(tree, static_cast<std::size_t>(level), x);
      EXPECT_NEAR(s.direct_sum, brute, 1e-12 * brute);
      EXPECT_NEAR(s.factorized_sum, brute, 1e-10 * brute);
      EXPECT_EQ(s.block_log_sums.size(), k);
    }
  }
}

TEST(ScaleSum, PropagationMatchesBruteForceAtEveryLevel) {
  const auto tree = random_tree(catalogs::cantor_and_fifths(), 3, 8, 31);
  for (std::size_t level = 0; level <= 8; ++level) {
    const std::span<const Environment> envs(tree.environments().data(), level);
    const double dp = propagate_scale_sum(tree.catalog(), 3, tree.root_type(), envs, 0.7);
    EXPECT_NEAR(dp, oracle::brute_force_scale_sum(tree, level, 0.7), 1e-12);
  }
}

TEST(ScaleSum, TooFewNecks) {
  const auto tree = random_tree(catalogs::cantor(), 1, 2, 0);
  EXPECT_THROW(scale_sum_at_neck(tree, 0.5, 3), DepthExhausted);
}
