#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "topzdd/top_zdd.hpp"
#include "topzdd/zdd.hpp"

namespace topzdd {

/// DFS spanning tree of the branching nodes. Nodes are named by preorder
/// (1-based); vectors indexed by preorder have an unused slot 0. Targets use
/// n+1 for ⊥ and n+2 for ⊤.
struct spanning_tree {
  struct edge {
    uint32_t src;
    uint32_t dst;
    uint8_t type;
  };

  uint32_t n = 0;
  element universe = 0;
  std::vector<handle> node;
  std::vector<element> label;
  std::vector<uint32_t> parent;  // 0 for the root
  std::vector<uint8_t> in_type;  // type of the tree edge into x
  std::vector<std::vector<uint32_t>> children;
  std::vector<std::array<uint32_t, 2>> succ;
  std::vector<edge> complement;

  [[nodiscard]] uint32_t bottom_code() const { return n + 1; }
  [[nodiscard]] uint32_t top_code() const { return n + 2; }
  [[nodiscard]] bool is_terminal(uint32_t x) const { return x > n; }
};

// 0-edge before 1-edge; the first arrival at a node claims the tree edge.
spanning_tree extract_spanning_tree(const zdd_store& store, handle root);

enum class merge_kind : uint8_t { leaf, vertical, horizontal };

/// Complement edge inside a cluster, in local preorders. dst = size+1 / size+2 for ⊥ / ⊤.
struct bag_entry {
  uint32_t src;
  uint32_t dst;
  uint8_t type;
  auto operator<=>(const bag_entry&) const = default;
};

struct top_tree_vertex {
  merge_kind kind = merge_kind::leaf;
  uint32_t left = 0;
  uint32_t right = 0;
  uint32_t parent = 0;  // kNone for the root
  uint32_t top = 0;     // global preorders of the boundary nodes
  uint32_t bottom = 0;  // 0 when the cluster has no bottom boundary
  uint32_t size = 0;
  uint32_t bottom_local = 0;
  uint32_t junction = 0;      // vertical: local preorder of the left child's bottom
  uint32_t label_delta = 0;   // vertical: ℓ(junction) - ℓ(top); leaf: ℓ(bottom) - ℓ(top)
  uint8_t edge_type = 0;      // leaf only
  uint32_t height = 0;
  uint32_t depth = 0;
  std::vector<bag_entry> bag;
  std::vector<spanning_tree::edge> bag_global;  // same edges with global endpoints, for hoisting

  // H_L / H_R distinction of horizontal merges
  [[nodiscard]] bool left_has_bottom(const std::vector<top_tree_vertex>& all) const {
    return kind == merge_kind::horizontal && all[left].bottom != 0;
  }
};

struct top_tree {
  static constexpr uint32_t kNone = UINT32_MAX;
  std::vector<top_tree_vertex> v;
  uint32_t root = kNone;
  std::vector<uint32_t> leaf_of;  // preorder x -> leaf vertex of the tree edge into x
  size_t rounds = 0;
  [[nodiscard]] uint32_t height() const { return root == kNone ? 0 : v[root].height; }
};

// Alternating greedy sweeps; every merge is checked for legality.
top_tree build_top_tree(const spanning_tree& t);

// Local preorder of global node x inside the cluster of vertex `at`, found by
// walking up from the leaf cluster of the edge into x (x must lie in the cluster).
uint32_t local_preorder(const top_tree& tt, uint32_t x, uint32_t at);

// Terminal edges go to the leaf of the edge into their source; branching edges
// to the lca of the two leaf clusters. Edges leaving the spanning-tree root are
// returned as root-level edges.
std::vector<spanning_tree::edge> place_complement_edges(const spanning_tree& t, top_tree& tt);

struct top_dag {
  std::vector<uint32_t> cls;           // top-tree vertex -> class
  std::vector<uint32_t> multiplicity;  // class -> number of top-tree vertices
  std::vector<uint32_t> representative;
  std::vector<spanning_tree::edge> root_edges;
  [[nodiscard]] size_t classes() const { return multiplicity.size(); }
};

// Shares identical clusters (structure, labels and bags compared exactly), then
// hoists the bags of classes that occur once into the root edge list.
top_dag dag_compress(top_tree& tt, std::vector<spanning_tree::edge> root_edges);

struct build_stats {
  uint32_t n = 0;
  uint64_t spanning_edges = 0;
  uint64_t complement_edges = 0;
  uint64_t top_tree_vertices = 0;
  uint32_t top_tree_height = 0;
  uint64_t greedy_rounds = 0;
  uint64_t dag_classes = 0;
  uint64_t tprime_vertices = 0;
  uint64_t dummies = 0;
  uint64_t root_edges = 0;
  uint64_t inner_edges = 0;
};

top_zdd encode(const spanning_tree& t, const top_tree& tt, const top_dag& dag);

// Full pipeline; `stats` is filled when given.
top_zdd compress(const zdd_store& store, handle root, build_stats* stats = nullptr);

}  // namespace topzdd
