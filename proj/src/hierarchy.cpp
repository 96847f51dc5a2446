#include "hmvp/hierarchy.hpp"

#include <algorithm>

#include "hmvp/error.hpp"

namespace hmvp {

namespace {

std::size_t pow3(int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

using Triangle = std::array<std::size_t, 3>;

}  // namespace

HierarchyTemplate::HierarchyTemplate(int max_level, Family family)
    : family_(family), max_level_(max_level) {
  if (max_level < 1 || max_level > kMaxSupportedLevel)
    throw LevelOutOfRange(max_level, 1, kMaxSupportedLevel);

  clusters_.resize(static_cast<std::size_t>(max_level) + 1);
  std::vector<Triangle> triangles{{0, 1, 2}};
  for (int k = 1; k <= max_level; ++k) {
    const std::size_t base = junction_count(k);
    auto& level_clusters = clusters_[static_cast<std::size_t>(k)];
    level_clusters.reserve(triangles.size());

    std::vector<Triangle> next;
    next.reserve(3 * triangles.size());
    for (std::size_t c = 0; c < triangles.size(); ++c) {
      Cluster cl;
      cl.level = k;
      cl.index = c;
      cl.oriented_corners = triangles[c];
      cl.corners = triangles[c];
      std::sort(cl.corners.begin(), cl.corners.end());
      cl.interiors = {base + 3 * c, base + 3 * c + 1, base + 3 * c + 2};
      level_clusters.push_back(cl);

      const auto [c0, c1, c2] = cl.oriented_corners;
      const auto [m01, m02, m12] = cl.interiors;
      next.push_back({c0, m01, m02});
      next.push_back({m01, c1, m12});
      next.push_back({m02, m12, c2});
    }
    triangles = std::move(next);
  }
}

void HierarchyTemplate::check_level(int level, int lo) const {
  if (level < lo || level > max_level_) throw LevelOutOfRange(level, lo, max_level_);
}

std::size_t HierarchyTemplate::node_count(int level) const {
  check_level(level, 0);
  return (pow3(level + 1) + 3) / 2;
}

std::size_t HierarchyTemplate::junction_count(int level) const {
  check_level(level, 1);
  return (pow3(level) + 3) / 2;
}

std::size_t HierarchyTemplate::interior_count(int level) const {
  check_level(level, 1);
  return pow3(level);
}

std::size_t HierarchyTemplate::cluster_count(int level) const {
  check_level(level, 1);
  return pow3(level - 1);
}

std::span<const Cluster> HierarchyTemplate::clusters(int level) const {
  check_level(level, 1);
  return clusters_[static_cast<std::size_t>(level)];
}

std::vector<std::size_t> HierarchyTemplate::junction_relabel(int level) const {
  std::vector<std::size_t> map(junction_count(level));
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
  return map;
}

NodeAddress HierarchyTemplate::address(int level, std::size_t node) const {
  const std::size_t n = node_count(level);
  if (node >= n) throw DimensionMismatch("node index out of range", n, node);
  NodeAddress addr;
  if (level == 0 || node < junction_count(level)) {
    addr.kind = NodeKind::Junction;
    addr.lower_index = node;
    return addr;
  }
  const std::size_t offset = node - junction_count(level);
  addr.kind = NodeKind::Interior;
  addr.cluster = offset / 3;
  addr.slot = static_cast<int>(offset % 3);
  return addr;
}

std::size_t HierarchyTemplate::index_of(int level, const NodeAddress& addr) const {
  if (addr.kind == NodeKind::Junction) {
    const std::size_t bound = level == 0 ? node_count(0) : junction_count(level);
    if (addr.lower_index >= bound) throw DimensionMismatch("junction index", bound, addr.lower_index);
    return addr.lower_index;
  }
  check_level(level, 1);
  if (addr.cluster >= cluster_count(level) || addr.slot < 0 || addr.slot > 2)
    throw DimensionMismatch("interior address", cluster_count(level), addr.cluster);
  return junction_count(level) + 3 * addr.cluster + static_cast<std::size_t>(addr.slot);
}

std::size_t HierarchyTemplate::cluster_of_interior(int level, std::size_t node) const {
  const std::size_t jc = junction_count(level);
  if (node < jc || node >= node_count(level))
    throw DimensionMismatch("interior node index", jc, node);
  return (node - jc) / 3;
}

int HierarchyTemplate::corner_slot(int level, std::size_t cluster, std::size_t node) const {
  const auto& corners = clusters(level)[cluster].corners;
  for (int r = 0; r < 3; ++r)
    if (corners[static_cast<std::size_t>(r)] == node) return r;
  return -1;
}

bool HierarchyTemplate::permitted(int level, std::size_t i, std::size_t j, bool strict) const {
  const std::size_t n = node_count(level);
  if (i >= n || j >= n || i == j) return false;
  if (level == 0) return true;

  const std::size_t jc = junction_count(level);
  const bool i_jun = i < jc;
  const bool j_jun = j < jc;
  if (i_jun && j_jun) return false;
  if (!i_jun && !j_jun) return (i - jc) / 3 == (j - jc) / 3;

  const std::size_t corner = i_jun ? i : j;
  const std::size_t interior = i_jun ? j : i;
  const std::size_t c = (interior - jc) / 3;
  const int slot = static_cast<int>((interior - jc) % 3);
  const auto& oriented = clusters_[static_cast<std::size_t>(level)][c].oriented_corners;
  for (int r = 0; r < 3; ++r) {
    if (oriented[static_cast<std::size_t>(r)] == corner) return !strict || slot != 2 - r;
  }
  return false;
}

BoolMatrix HierarchyTemplate::adjacency_mask(int level, bool strict) const {
  const std::size_t n = node_count(level);
  BoolMatrix mask(n);
  if (level == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) mask.set(i, j, true);
    return mask;
  }
  for (const Cluster& cl : clusters(level)) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) mask.set(cl.interiors[a], cl.interiors[b], true);
      for (std::size_t corner : cl.oriented_corners)
        if (permitted(level, corner, cl.interiors[a], strict)) mask.set(corner, cl.interiors[a], true);
    }
  }
  return mask;
}

}  // namespace hmvp
