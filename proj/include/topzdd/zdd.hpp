#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "topzdd/errors.hpp"

namespace topzdd {

using handle = uint32_t;
using element = uint32_t;
using big_count = boost::multiprecision::cpp_int;
using set_list = std::vector<std::vector<element>>;

inline constexpr handle kBottom = 0;  // empty family
inline constexpr handle kTop = 1;     // {∅}

struct zdd_node {
  element label;
  handle lo;
  handle hi;
};

enum class set_op : uint8_t { unite, intersect, subtract };

/// Append-only arena of reduced, ordered ZDD nodes over the universe {1..c}.
///
/// Handles 0 and 1 are the terminals; every other handle names a branching
/// node whose children were created before it. Terminals carry the
/// effective label c + 1.
class zdd_store {
 public:
  explicit zdd_store(element universe);

  [[nodiscard]] element universe() const { return universe_; }
  [[nodiscard]] size_t arena_size() const { return nodes_.size(); }

  [[nodiscard]] static bool is_terminal(handle h) { return h < 2; }
  [[nodiscard]] element label(handle h) const { return nodes_.at(h).label; }
  [[nodiscard]] handle lo(handle h) const { return nodes_.at(h).lo; }
  [[nodiscard]] handle hi(handle h) const { return nodes_.at(h).hi; }
  [[nodiscard]] const zdd_node& node(handle h) const { return nodes_.at(h); }

  // Zero-suppressed: returns lo when hi is ⊥, otherwise the unique node.
  handle make_node(element label, handle lo, handle hi);

  handle apply(set_op op, handle f, handle g);
  handle unite(handle f, handle g) { return apply(set_op::unite, f, g); }
  handle intersect(handle f, handle g) { return apply(set_op::intersect, f, g); }
  handle subtract(handle f, handle g) { return apply(set_op::subtract, f, g); }

  // Family of exactly the listed sets (each ascending or not; duplicates ok).
  handle from_sets(const set_list& sets);
  handle single_set(std::span<const element> s);
  // All subsets of {first..last}.
  handle power_set(element first, element last);

  [[nodiscard]] bool member(handle f, std::span<const element> s) const;
  [[nodiscard]] big_count count_sets(handle f) const;
  // Member sets ordered lexicographically by characteristic vector (x1, x2, ...).
  [[nodiscard]] set_list enumerate(handle f, uint64_t limit) const;
  // Branching nodes reachable from f.
  [[nodiscard]] size_t node_count(handle f) const;

  // Full-store check of ordering, zero-suppression and uniqueness.
  void audit() const;

 private:
  struct triple_hash {
    size_t operator()(const zdd_node& n) const;
  };
  struct triple_eq {
    bool operator()(const zdd_node& a, const zdd_node& b) const {
      return a.label == b.label && a.lo == b.lo && a.hi == b.hi;
    }
  };

  handle apply_rec(set_op op, handle f, handle g);
  handle from_sets_rec(const set_list& sets, std::vector<uint32_t>& idx, size_t begin, size_t end, size_t depth);

  element universe_;
  std::vector<zdd_node> nodes_;
  std::unordered_map<zdd_node, handle, triple_hash, triple_eq> unique_;
  std::unordered_map<uint64_t, handle> apply_cache_[3];
};

/// Bytes of the plain node-array baseline: ceil((2 n floor(log2 n) + n floor(log2 c)) / 8).
uint64_t naive_size_bytes(uint64_t n, uint64_t c);

/// Text exchange format: header `c=<universe>`, then one set per line as
/// ascending space-separated integers; an empty line is the empty set.
void write_family_text(std::ostream& os, const zdd_store& store, handle f, uint64_t limit);
struct text_family {
  element universe;
  set_list sets;
};
text_family read_family_text(std::istream& is);

}  // namespace topzdd
