#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "hmvp/error.hpp"
#include "hmvp/hierarchy.hpp"

namespace hmvp {
namespace {

TEST(Hierarchy, NodeCounts) {
  const HierarchyTemplate t(4);
  EXPECT_EQ(t.node_count(0), 3u);
  EXPECT_EQ(t.node_count(1), 6u);
  EXPECT_EQ(t.node_count(2), 15u);
  EXPECT_EQ(t.node_count(3), 42u);
  EXPECT_EQ(t.node_count(4), 123u);
  EXPECT_THROW(t.node_count(5), LevelOutOfRange);
  EXPECT_THROW(t.node_count(-1), LevelOutOfRange);
}

TEST(Hierarchy, JunctionCounts) {
  const HierarchyTemplate t(4);
  EXPECT_EQ(t.junction_count(1), 3u);
  EXPECT_EQ(t.junction_count(2), 6u);
  EXPECT_EQ(t.junction_count(3), 15u);
  EXPECT_EQ(t.junction_count(4), 42u);
  EXPECT_THROW(t.junction_count(0), LevelOutOfRange);
  EXPECT_EQ(t.interior_count(3), 27u);
  EXPECT_EQ(t.cluster_count(3), 9u);
}

TEST(Hierarchy, RejectsBadMaxLevel) {
  EXPECT_THROW(HierarchyTemplate(0), LevelOutOfRange);
  EXPECT_THROW(HierarchyTemplate(HierarchyTemplate::kMaxSupportedLevel + 1), LevelOutOfRange);
}

TEST(Hierarchy, LevelOneCluster) {
  const HierarchyTemplate t(1);
  const auto cl = t.clusters(1);
  ASSERT_EQ(cl.size(), 1u);
  EXPECT_EQ(cl[0].corners, (std::array<std::size_t, 3>{0, 1, 2}));
  EXPECT_EQ(cl[0].interiors, (std::array<std::size_t, 3>{3, 4, 5}));
}

TEST(Hierarchy, LevelTwoClusters) {
  const HierarchyTemplate t(2);
  const auto cl = t.clusters(2);
  ASSERT_EQ(cl.size(), 3u);
  EXPECT_EQ(cl[0].interiors, (std::array<std::size_t, 3>{6, 7, 8}));
  EXPECT_EQ(cl[1].interiors, (std::array<std::size_t, 3>{9, 10, 11}));
  EXPECT_EQ(cl[2].interiors, (std::array<std::size_t, 3>{12, 13, 14}));
  // a1, a4, a5 form the top cluster.
  EXPECT_EQ(cl[0].corners, (std::array<std::size_t, 3>{0, 3, 4}));
  EXPECT_EQ(cl[1].corners, (std::array<std::size_t, 3>{1, 3, 5}));
  EXPECT_EQ(cl[2].corners, (std::array<std::size_t, 3>{2, 4, 5}));
}

TEST(Hierarchy, JunctionRelabelIsIdentity) {
  const HierarchyTemplate t(3);
  const auto map2 = t.junction_relabel(2);
  ASSERT_EQ(map2.size(), 6u);
  EXPECT_EQ(map2[3], 3u);
  const auto map1 = t.junction_relabel(1);
  EXPECT_EQ(map1[0], 0u);
  for (int k = 1; k <= 3; ++k) {
    const auto m = t.junction_relabel(k);
    EXPECT_EQ(m.size(), t.junction_count(k));
    std::set<std::size_t> image(m.begin(), m.end());
    EXPECT_EQ(image.size(), m.size());
    EXPECT_LT(*image.rbegin(), t.node_count(k - 1));
  }
  EXPECT_THROW(t.junction_relabel(0), LevelOutOfRange);
}

TEST(Hierarchy, MaskExamples) {
  const HierarchyTemplate t(2);
  for (bool strict : {false, true}) {
    const auto mask = t.adjacency_mask(2, strict);
    EXPECT_FALSE(mask(0, 1));  // a1, a2
    EXPECT_FALSE(mask(0, 2));  // a1, a3
    EXPECT_FALSE(mask(3, 5));  // a4, a6
    EXPECT_TRUE(mask(3, 6));   // a4, a7
    EXPECT_TRUE(mask(0, 6));   // a1, a7
    EXPECT_TRUE(mask(4, 7));
    EXPECT_TRUE(mask(4, 8));
    EXPECT_EQ(mask(4, 6), !strict);
    EXPECT_EQ(mask(0, 8), !strict);
  }
  const auto base = t.adjacency_mask(0, false);
  int pairs = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) pairs += base(i, j) ? 1 : 0;
  EXPECT_EQ(pairs, 3);
}

TEST(Hierarchy, StrictMaskMatchesBaseGraph) {
  // Sigma_1 pattern: corner a1 sees a4, a5; a2 sees a4, a6; a3 sees a5, a6.
  const HierarchyTemplate t(1);
  const auto m = t.adjacency_mask(1, true);
  const bool expected[3][3] = {{true, true, false}, {true, false, true}, {false, true, true}};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(m(r, 3 + s), expected[r][s]) << r << "," << s;
}

class HierarchyLevels : public ::testing::TestWithParam<int> {};

TEST_P(HierarchyLevels, CountsAndPartition) {
  const int k = GetParam();
  const HierarchyTemplate t(k);
  EXPECT_EQ(t.junction_count(k) + 3 * t.cluster_count(k), t.node_count(k));

  std::vector<int> interior_hits(t.node_count(k), 0);
  std::vector<int> corner_hits(t.node_count(k), 0);
  for (const Cluster& cl : t.clusters(k)) {
    EXPECT_TRUE(std::is_sorted(cl.corners.begin(), cl.corners.end()));
    EXPECT_LT(cl.corners[0], cl.corners[1]);
    EXPECT_LT(cl.corners[1], cl.corners[2]);
    EXPECT_EQ(cl.interiors[0], t.junction_count(k) + 3 * cl.index);
    for (std::size_t c : cl.corners) {
      EXPECT_LT(c, t.junction_count(k));
      ++corner_hits[c];
    }
    for (std::size_t i : cl.interiors) ++interior_hits[i];
  }
  for (std::size_t i = 0; i < t.node_count(k); ++i) {
    if (i < t.junction_count(k)) {
      EXPECT_GE(corner_hits[i], 1) << i;
      EXPECT_LE(corner_hits[i], 2) << i;
      EXPECT_EQ(interior_hits[i], 0);
    } else {
      EXPECT_EQ(interior_hits[i], 1) << i;
    }
  }
}

TEST_P(HierarchyLevels, MaskProperties) {
  const int k = GetParam();
  const HierarchyTemplate t(k);
  const auto strict = t.adjacency_mask(k, true);
  const auto loose = t.adjacency_mask(k, false);
  const std::size_t jc = t.junction_count(k);
  std::vector<int> strict_corners_per_interior(t.node_count(k), 0);
  for (std::size_t i = 0; i < loose.size(); ++i) {
    EXPECT_FALSE(loose(i, i));
    for (std::size_t j = 0; j < loose.size(); ++j) {
      EXPECT_EQ(loose(i, j), loose(j, i));
      if (strict(i, j)) EXPECT_TRUE(loose(i, j));
      if (i < jc && j < jc) EXPECT_FALSE(loose(i, j));
      EXPECT_EQ(loose(i, j), t.permitted(k, i, j, false));
      if (i < jc && j >= jc && strict(i, j)) ++strict_corners_per_interior[j];
    }
  }
  for (std::size_t j = jc; j < t.node_count(k); ++j) EXPECT_EQ(strict_corners_per_interior[j], 2);
}

TEST_P(HierarchyLevels, AddressBijection) {
  const int k = GetParam();
  const HierarchyTemplate t(k);
  std::set<std::tuple<int, std::size_t, std::size_t, int>> seen;
  for (std::size_t i = 0; i < t.node_count(k); ++i) {
    const NodeAddress a = t.address(k, i);
    EXPECT_EQ(t.index_of(k, a), i);
    seen.insert({static_cast<int>(a.kind), a.lower_index, a.cluster, a.slot});
    // Junctions resolve recursively down to level 0.
    std::size_t idx = i;
    for (int level = k; level >= 1 && t.address(level, idx).kind == NodeKind::Junction; --level)
      idx = t.junction_relabel(level)[t.address(level, idx).lower_index];
    EXPECT_LT(idx, t.node_count(k));
  }
  EXPECT_EQ(seen.size(), t.node_count(k));
}

INSTANTIATE_TEST_SUITE_P(Levels, HierarchyLevels, ::testing::Values(1, 2, 3, 4, 5));

}  // namespace
}  // namespace hmvp
