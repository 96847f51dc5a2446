#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hmvp {

/// Hierarchical graph families. Only the Sierpinski gasket ships; other
/// families plug in by providing the same counts, cluster tables and mask.
enum class Family { Sierpinski };

/// One copy of the base graph G_1 inside G_k: three corners (junction nodes)
/// and three interior nodes.
///
/// Interior slot 0 sits between oriented corners 0 and 1, slot 1 between
/// corners 0 and 2, slot 2 between corners 1 and 2. Oriented corner r is
/// therefore not adjacent to interior slot 2 - r in the strict edge pattern.
struct Cluster {
  int level = 0;
  std::size_t index = 0;
  std::array<std::size_t, 3> corners{};           // strictly increasing
  std::array<std::size_t, 3> interiors{};         // contiguous, increasing
  std::array<std::size_t, 3> oriented_corners{};  // geometric order
};

enum class NodeKind : std::uint8_t { Junction, Interior };

/// Junction nodes are addressed by their index one level down (the same
/// integer under the canonical ordering); interiors by (cluster, slot).
struct NodeAddress {
  NodeKind kind = NodeKind::Junction;
  std::size_t lower_index = 0;  // Junction
  std::size_t cluster = 0;      // Interior
  int slot = 0;                 // Interior, in {0,1,2}

  friend bool operator==(const NodeAddress&, const NodeAddress&) = default;
};

/// Dense symmetric boolean matrix.
class BoolMatrix {
 public:
  explicit BoolMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}
  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) {
    bits_[i * n_ + j] = v;
    bits_[j * n_ + i] = v;
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

/// Combinatorics of a Sierpinski hierarchy G_0, ..., G_max_level.
///
/// Canonical node order at level k: the junction segment first, ordered
/// exactly like the nodes of level k-1, then the interiors cluster by
/// cluster. Clusters of level k are the triangles of G_{k-1}; triangles of
/// G_k are produced by subdividing each cluster into
/// (c0, m01, m02), (m01, c1, m12), (m02, m12, c2). Sub-triangle i keeps
/// outer corner i, and sub-triangles i and j share the midpoint m_ij, i.e.
/// copy i's corner j is identified with copy j's corner i.
///
/// Immutable after construction.
class HierarchyTemplate {
 public:
  static constexpr int kMaxSupportedLevel = 12;

  explicit HierarchyTemplate(int max_level, Family family = Family::Sierpinski);

  Family family() const { return family_; }
  int max_level() const { return max_level_; }

  /// (3^(level+1) + 3) / 2; level in [0, max_level].
  std::size_t node_count(int level) const;
  /// node_count(level - 1); level in [1, max_level].
  std::size_t junction_count(int level) const;
  std::size_t interior_count(int level) const;
  std::size_t cluster_count(int level) const;

  std::span<const Cluster> clusters(int level) const;

  /// Map from junction index at `level` to node index at `level - 1`.
  std::vector<std::size_t> junction_relabel(int level) const;

  NodeAddress address(int level, std::size_t node) const;
  std::size_t index_of(int level, const NodeAddress& addr) const;

  /// Cluster owning an interior node.
  std::size_t cluster_of_interior(int level, std::size_t node) const;

  /// Position of `node` in clusters(level)[cluster].corners, or -1.
  int corner_slot(int level, std::size_t cluster, std::size_t node) const;

  /// Whether a nonzero covariance between distinct nodes i and j is allowed.
  bool permitted(int level, std::size_t i, std::size_t j, bool strict) const;

  BoolMatrix adjacency_mask(int level, bool strict) const;

 private:
  void check_level(int level, int lo) const;

  Family family_;
  int max_level_;
  // clusters_[k] for k in [1, max_level]; clusters_[0] empty.
  std::vector<std::vector<Cluster>> clusters_;
};

}  // namespace hmvp
