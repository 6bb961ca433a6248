#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "topzdd/bit_vector.hpp"
#include "topzdd/packed_array.hpp"

namespace topzdd {

/// Ordinal tree in balanced-parentheses form.
///
/// A node is named by the 1-based position of its opening parenthesis; the
/// root is position 1. Navigation runs on excess searches over a min-excess
/// tree of 512-bit blocks. Operations that have no answer (parent of the
/// root, child of a leaf, sibling past the end) return `npos`.
class bp_tree {
 public:
  using node = size_t;
  static constexpr node npos = std::numeric_limits<size_t>::max();
  static constexpr size_t kBlockBits = 512;

  bp_tree() = default;
  // true = '(' ; the sequence must be balanced and non-empty.
  explicit bp_tree(const std::vector<bool>& parens);

  [[nodiscard]] size_t node_count() const { return bits_.size() / 2; }
  [[nodiscard]] size_t length() const { return bits_.size(); }
  [[nodiscard]] node root() const { return node_count() == 0 ? npos : 1; }

  [[nodiscard]] node parent(node x) const;
  [[nodiscard]] node first_child(node x) const;
  [[nodiscard]] node last_child(node x) const;
  [[nodiscard]] node next_sibling(node x) const;
  [[nodiscard]] node prev_sibling(node x) const;
  [[nodiscard]] bool is_leaf(node x) const;
  [[nodiscard]] size_t preorder_rank(node x) const;  // 1-based
  [[nodiscard]] node preorder_select(size_t k) const;
  // Number of leaves whose opening parenthesis is at or before x; a leaf's
  // own leaf_rank is therefore its 1-based index among leaves.
  [[nodiscard]] size_t leaf_rank(node x) const;
  [[nodiscard]] node leaf_select(size_t r) const;
  [[nodiscard]] size_t leaf_count() const { return leaf_rank_prefix(bits_.size()); }
  [[nodiscard]] size_t depth(node x) const;
  [[nodiscard]] size_t subtree_size(node x) const;
  [[nodiscard]] node leftmost_leaf(node x) const;
  [[nodiscard]] node rightmost_leaf(node x) const;
  [[nodiscard]] node lca(node x, node y) const;

  [[nodiscard]] node find_close(size_t open) const;
  [[nodiscard]] node find_open(size_t close) const;

  [[nodiscard]] const bit_vector& bits() const { return bits_; }
  [[nodiscard]] uint64_t size_in_bits() const { return serialized_bits(*this); }
  void write(word_writer& w) const;
  static bp_tree read(word_reader& r);

 private:
  void build_index();
  void check_node(node x) const;
  [[nodiscard]] int64_t excess(size_t i) const;  // E(i), E(0) = 0
  [[nodiscard]] size_t leaf_rank_prefix(size_t i) const;  // leaf opens among the first i positions
  [[nodiscard]] uint64_t leaf_word(size_t k) const;
  [[nodiscard]] unsigned byte_at(size_t q) const;

  [[nodiscard]] size_t fwd_search(size_t i, int64_t target) const;
  [[nodiscard]] size_t bwd_search(size_t i, int64_t target) const;
  [[nodiscard]] size_t rmq(size_t l, size_t r) const;

  // helpers over [from, to] (1-based, inclusive) given E(from - 1) = e
  [[nodiscard]] size_t scan_fwd(size_t from, size_t to, int64_t e, int64_t target) const;
  [[nodiscard]] int64_t min_fwd(size_t from, size_t to, int64_t e) const;
  // largest j in [from, to] with E(j) <= target, given E(to) = e
  [[nodiscard]] size_t scan_bwd(size_t from, size_t to, int64_t e, int64_t target) const;
  [[nodiscard]] size_t first_block_leq(size_t first, int64_t target) const;
  [[nodiscard]] size_t last_block_leq(size_t last, int64_t target) const;
  [[nodiscard]] int64_t block_range_min(size_t first, size_t last) const;
  [[nodiscard]] int64_t tree_value(size_t idx) const { return static_cast<int64_t>(min_tree_[idx]); }

  bit_vector bits_;
  size_t leaves_ = 0;        // power-of-two leaf count of the min tree
  packed_int_array min_tree_;  // heap-ordered min excess per block, padding = large
  packed_int_array leaf_super_;  // leaf opens before each 1024-bit superblock
};

}  // namespace topzdd
