#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "topzdd/bit_sequence.hpp"
#include "topzdd/bp_tree.hpp"
#include "topzdd/packed_array.hpp"
#include "topzdd/word_io.hpp"
#include "topzdd/zdd.hpp"

namespace topzdd {

/// One decompressed node: label and both targets (preorders, n+1 = ⊥, n+2 = ⊤).
struct node_triple {
  element label;
  uint32_t zero;
  uint32_t one;
  bool operator==(const node_triple&) const = default;
};

// Preorder-named edge list of a ZDD, by plain DFS (0-edge first). Used as the
// reference that decompressions are compared against.
std::vector<node_triple> preorder_edge_list(const zdd_store& store, handle root);

/// Counters filled by the navigation queries.
struct query_trace {
  size_t steps = 0;       // T' vertices entered, dummy hops included
  size_t dummy_hops = 0;
  size_t max_descent = 0; // longest single root-to-leaf descent
};

/// Decompressed cluster: relative labels and local successor table (0 = not in
/// this cluster, kBotLocal / kTopLocal for terminals).
struct cluster_expansion {
  static constexpr uint32_t kBotLocal = UINT32_MAX - 1;
  static constexpr uint32_t kTopLocal = UINT32_MAX;
  std::vector<uint32_t> rel_label;
  std::vector<std::array<uint32_t, 2>> succ;
};

struct top_zdd_parts;

class top_zdd {
 public:
  enum class shape : uint8_t { normal = 0, bottom = 1, top = 2, single = 3 };

  static constexpr size_t kComponents = 16;
  static const std::array<std::string_view, kComponents> kComponentNames;

  top_zdd() = default;

  [[nodiscard]] shape form() const { return shape_; }
  [[nodiscard]] uint32_t node_count() const { return n_; }
  [[nodiscard]] element universe() const { return universe_; }
  [[nodiscard]] element root_label() const { return root_label_; }
  [[nodiscard]] uint32_t bottom_code() const { return n_ + 1; }
  [[nodiscard]] uint32_t top_code() const { return n_ + 2; }

  [[nodiscard]] element label(uint32_t x, query_trace* trace = nullptr) const;
  [[nodiscard]] uint32_t child(uint32_t x, uint8_t type, query_trace* trace = nullptr) const;
  [[nodiscard]] uint32_t zero(uint32_t x, query_trace* trace = nullptr) const { return child(x, 0, trace); }
  [[nodiscard]] uint32_t one(uint32_t x, query_trace* trace = nullptr) const { return child(x, 1, trace); }
  [[nodiscard]] bool member(std::span<const element> s) const;

  // T' vertices are named by their BP open position.
  [[nodiscard]] size_t cluster_size(size_t pos) const;
  [[nodiscard]] cluster_expansion expand_cluster(size_t pos) const;
  [[nodiscard]] std::vector<node_triple> decompress_all() const;

  [[nodiscard]] const bp_tree& tree() const { return bp_; }
  [[nodiscard]] bool is_dummy(size_t pos) const;
  [[nodiscard]] size_t resolve(size_t pos) const;  // dummy -> its target, others unchanged
  [[nodiscard]] size_t vertex_count() const { return shape_ == shape::normal ? bp_.node_count() : 0; }
  [[nodiscard]] size_t dummy_count() const { return clsize_.size(); }
  [[nodiscard]] size_t root_edge_count() const { return dst_root_.size(); }
  [[nodiscard]] size_t inner_edge_count() const { return src_in_.size(); }
  [[nodiscard]] size_t vertical_count() const { return preorder_diff_.size(); }

  [[nodiscard]] std::array<uint64_t, kComponents> component_bits() const;
  [[nodiscard]] std::vector<bit_encoding> bit_encodings() const;
  void write_components(word_writer& w) const;  // each component length-prefixed
  void read_components(word_reader& r);
  // Header fields come from the container; the result is audited.
  static top_zdd from_components(shape form, uint32_t n, element universe, element root_label, word_reader& r);

  // Length identities between components.
  void audit() const;

 private:
  friend top_zdd encode_parts(top_zdd_parts&& p);

  struct frame;
  [[nodiscard]] uint32_t vertical_index(size_t pos) const;
  [[nodiscard]] bool is_horizontal(size_t pos) const;
  [[nodiscard]] uint32_t leaf_index(size_t pos) const;
  [[nodiscard]] std::pair<size_t, size_t> bag_range(size_t pos) const;
  [[nodiscard]] size_t position_of_real(size_t q) const;
  [[nodiscard]] uint32_t unwind(const std::vector<frame>& path, size_t upto, uint32_t k) const;

  shape shape_ = shape::bottom;
  uint32_t n_ = 0;
  element universe_ = 1;
  element root_label_ = 0;

  bp_tree bp_;
  bit_sequence b_dummy_;
  packed_int_array clsize_;
  packed_int_array label_span_;
  bit_sequence type_span_;
  bit_sequence b_h_;
  packed_int_array preorder_diff_;
  packed_int_array label_diff_;
  bit_sequence b_src_root_;
  packed_int_array dst_root_;
  bit_sequence type_root_;
  bit_sequence b_edge_;
  packed_int_array src_in_;
  packed_int_array dst_in_;
  bit_sequence type_in_;
  packed_int_array dst_dummy_;
};

/// Plain-value form of every component, filled by the encoder.
struct top_zdd_parts {
  top_zdd::shape form = top_zdd::shape::bottom;
  uint32_t n = 0;
  element universe = 1;
  element root_label = 0;
  std::vector<bool> bp;
  std::vector<bool> b_dummy;
  std::vector<uint64_t> clsize;
  std::vector<uint64_t> label_span;
  std::vector<bool> type_span;
  std::vector<bool> b_h;
  std::vector<uint64_t> preorder_diff;
  std::vector<uint64_t> label_diff;
  std::vector<bool> b_src_root;
  std::vector<uint64_t> dst_root;
  std::vector<bool> type_root;
  std::vector<bool> b_edge;
  std::vector<uint64_t> src_in;
  std::vector<uint64_t> dst_in;
  std::vector<bool> type_in;
  std::vector<uint64_t> dst_dummy;
};

top_zdd encode_parts(top_zdd_parts&& p);

}  // namespace topzdd
