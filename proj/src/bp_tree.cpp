#include "topzdd/bp_tree.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

namespace topzdd {

namespace {

struct byte_tables {
  std::array<int8_t, 256> delta{};
  std::array<int8_t, 256> min_prefix{};  // min over t=1..8 of the prefix sum

  byte_tables() {
    for (unsigned b = 0; b < 256; ++b) {
      int e = 0;
      int m = 8;
      for (unsigned t = 0; t < 8; ++t) {
        e += ((b >> t) & 1U) ? 1 : -1;
        m = std::min(m, e);
      }
      delta[b] = static_cast<int8_t>(e);
      min_prefix[b] = static_cast<int8_t>(m);
    }
  }
};

const byte_tables& tables() {
  static const byte_tables t;
  return t;
}

constexpr size_t kLeafSuperWords = 16;

}  // namespace

bp_tree::bp_tree(const std::vector<bool>& parens) : bits_(parens) {
  int64_t e = 0;
  for (bool p : parens) {
    e += p ? 1 : -1;
    if (e < 0) throw invariant_error("bp_tree: unbalanced parentheses (negative excess)");
  }
  if (e != 0) throw invariant_error("bp_tree: unbalanced parentheses (non-zero final excess)");
  build_index();
}

void bp_tree::build_index() {
  const size_t n = bits_.size();
  const size_t nblocks = std::max<size_t>(1, (n + kBlockBits - 1) / kBlockBits);
  leaves_ = std::bit_ceil(nblocks);
  std::vector<uint64_t> mins(nblocks, 0);
  int64_t e = 0;
  int64_t max_e = 0;
  for (size_t b = 0; b < nblocks; ++b) {
    int64_t m = std::numeric_limits<int64_t>::max();
    const size_t end = std::min(n, (b + 1) * kBlockBits);
    for (size_t j = b * kBlockBits; j < end; ++j) {
      e += bits_.get0(j) ? 1 : -1;
      m = std::min(m, e);
      max_e = std::max(max_e, e);
    }
    mins[b] = end > b * kBlockBits ? static_cast<uint64_t>(m) : 0;
  }
  const auto pad = static_cast<uint64_t>(max_e + 2);
  std::vector<uint64_t> tree(2 * leaves_, pad);
  for (size_t b = 0; b < nblocks; ++b) tree[leaves_ + b] = mins[b];
  for (size_t i = leaves_ - 1; i >= 1; --i) tree[i] = std::min(tree[2 * i], tree[2 * i + 1]);
  min_tree_ = packed_int_array(tree);

  const auto& words = bits_.words();
  const size_t nsuper = (words.size() + kLeafSuperWords - 1) / kLeafSuperWords;
  std::vector<uint64_t> super(nsuper + 1, 0);
  uint64_t count = 0;
  for (size_t k = 0; k < words.size(); ++k) {
    if (k % kLeafSuperWords == 0) super[k / kLeafSuperWords] = count;
    count += static_cast<uint64_t>(std::popcount(leaf_word(k)));
  }
  super[nsuper] = count;
  leaf_super_ = packed_int_array(super);
}

uint64_t bp_tree::leaf_word(size_t k) const {
  const auto& words = bits_.words();
  const uint64_t w = words[k];
  const uint64_t next = k + 1 < words.size() ? words[k + 1] : 0;
  return w & ~((w >> 1) | (next << 63));
}

unsigned bp_tree::byte_at(size_t q) const {
  return static_cast<unsigned>((bits_.words()[q >> 3] >> ((q & 7) * 8)) & 0xFFU);
}

int64_t bp_tree::excess(size_t i) const {
  return 2 * static_cast<int64_t>(bits_.rank1(i)) - static_cast<int64_t>(i);
}

void bp_tree::check_node(node x) const {
  if (x == 0 || x > bits_.size() || !bits_.get0(x - 1)) {
    throw range_error("bp_tree: " + std::to_string(x) + " is not a node");
  }
}

size_t bp_tree::scan_fwd(size_t from, size_t to, int64_t e, int64_t target) const {
  const auto& tb = tables();
  size_t j = from;
  while (j <= to) {
    if (((j - 1) & 7) == 0 && j + 7 <= to) {
      const unsigned byte = byte_at((j - 1) >> 3);
      if (e + tb.min_prefix[byte] > target) {
        e += tb.delta[byte];
        j += 8;
        continue;
      }
    }
    e += bits_.get0(j - 1) ? 1 : -1;
    if (e <= target) return j;
    ++j;
  }
  return npos;
}

int64_t bp_tree::min_fwd(size_t from, size_t to, int64_t e) const {
  const auto& tb = tables();
  int64_t m = std::numeric_limits<int64_t>::max();
  size_t j = from;
  while (j <= to) {
    if (((j - 1) & 7) == 0 && j + 7 <= to) {
      const unsigned byte = byte_at((j - 1) >> 3);
      m = std::min(m, e + tb.min_prefix[byte]);
      e += tb.delta[byte];
      j += 8;
      continue;
    }
    e += bits_.get0(j - 1) ? 1 : -1;
    m = std::min(m, e);
    ++j;
  }
  return m;
}

size_t bp_tree::scan_bwd(size_t from, size_t to, int64_t e, int64_t target) const {
  const auto& tb = tables();
  size_t j = to;
  while (j >= from && j != 0) {
    if ((j & 7) == 0 && j >= from + 7) {
      const unsigned byte = byte_at((j >> 3) - 1);
      const int64_t before = e - tb.delta[byte];
      if (before + tb.min_prefix[byte] > target) {
        e = before;
        j -= 8;
        continue;
      }
    }
    if (e <= target) return j;
    e -= bits_.get0(j - 1) ? 1 : -1;
    --j;
  }
  return npos;
}

size_t bp_tree::first_block_leq(size_t first, int64_t target) const {
  const size_t nblocks = (bits_.size() + kBlockBits - 1) / kBlockBits;
  if (first >= nblocks) return npos;
  size_t idx = leaves_ + first;
  if (tree_value(idx) > target) {
    bool found = false;
    while (idx > 1) {
      if ((idx & 1) == 0 && tree_value(idx + 1) <= target) {
        idx = idx + 1;
        found = true;
        break;
      }
      idx >>= 1;
    }
    if (!found) return npos;
    while (idx < leaves_) idx = tree_value(2 * idx) <= target ? 2 * idx : 2 * idx + 1;
  }
  return idx - leaves_;
}

size_t bp_tree::last_block_leq(size_t last, int64_t target) const {
  size_t idx = leaves_ + last;
  if (tree_value(idx) > target) {
    bool found = false;
    while (idx > 1) {
      if ((idx & 1) == 1 && tree_value(idx - 1) <= target) {
        idx = idx - 1;
        found = true;
        break;
      }
      idx >>= 1;
    }
    if (!found) return npos;
    while (idx < leaves_) idx = tree_value(2 * idx + 1) <= target ? 2 * idx + 1 : 2 * idx;
  }
  return idx - leaves_;
}

int64_t bp_tree::block_range_min(size_t first, size_t last) const {
  int64_t m = std::numeric_limits<int64_t>::max();
  size_t lo = first + leaves_;
  size_t hi = last + leaves_ + 1;
  while (lo < hi) {
    if (lo & 1) m = std::min(m, tree_value(lo++));
    if (hi & 1) m = std::min(m, tree_value(--hi));
    lo >>= 1;
    hi >>= 1;
  }
  return m;
}

size_t bp_tree::fwd_search(size_t i, int64_t target) const {
  const size_t n = bits_.size();
  if (i >= n) return npos;
  const size_t from = i + 1;
  const size_t b = (from - 1) / kBlockBits;
  const size_t r = scan_fwd(from, std::min(n, (b + 1) * kBlockBits), excess(i), target);
  if (r != npos) return r;
  const size_t nb = first_block_leq(b + 1, target);
  if (nb == npos) return npos;
  const size_t start = nb * kBlockBits + 1;
  return scan_fwd(start, std::min(n, start + kBlockBits - 1), excess(start - 1), target);
}

size_t bp_tree::bwd_search(size_t i, int64_t target) const {
  if (i == 0) return npos;
  const size_t j0 = i - 1;
  if (j0 > 0) {
    const size_t b = (j0 - 1) / kBlockBits;
    const size_t r = scan_bwd(b * kBlockBits + 1, j0, excess(j0), target);
    if (r != npos) return r;
    if (b > 0) {
      const size_t pb = last_block_leq(b - 1, target);
      if (pb != npos) {
        const size_t to = (pb + 1) * kBlockBits;
        return scan_bwd(pb * kBlockBits + 1, to, excess(to), target);
      }
    }
  }
  return target >= 0 ? 0 : npos;
}

size_t bp_tree::rmq(size_t l, size_t r) const {
  const size_t bl = (l - 1) / kBlockBits;
  const size_t br = (r - 1) / kBlockBits;
  const int64_t el = excess(l - 1);
  if (bl == br) return scan_fwd(l, r, el, min_fwd(l, r, el));
  const size_t left_end = (bl + 1) * kBlockBits;
  const int64_t ml = min_fwd(l, left_end, el);
  const int64_t mm = br > bl + 1 ? block_range_min(bl + 1, br - 1) : std::numeric_limits<int64_t>::max();
  const size_t right_start = br * kBlockBits + 1;
  const int64_t er = excess(right_start - 1);
  const int64_t mr = min_fwd(right_start, r, er);
  const int64_t m = std::min({ml, mm, mr});
  if (ml == m) return scan_fwd(l, left_end, el, m);
  if (mm == m) {
    const size_t b = first_block_leq(bl + 1, m);
    const size_t start = b * kBlockBits + 1;
    return scan_fwd(start, start + kBlockBits - 1, excess(start - 1), m);
  }
  return scan_fwd(right_start, r, er, m);
}

bp_tree::node bp_tree::find_close(size_t open) const {
  check_node(open);
  return fwd_search(open, excess(open) - 1);
}

bp_tree::node bp_tree::find_open(size_t close) const {
  if (close == 0 || close > bits_.size() || bits_.get0(close - 1)) {
    throw range_error("bp_tree::find_open: " + std::to_string(close) + " is not a closing parenthesis");
  }
  return bwd_search(close, excess(close)) + 1;
}

bp_tree::node bp_tree::parent(node x) const {
  check_node(x);
  if (x == 1) return npos;
  return bwd_search(x, excess(x) - 2) + 1;
}

bool bp_tree::is_leaf(node x) const {
  check_node(x);
  return !bits_.get0(x);
}

bp_tree::node bp_tree::first_child(node x) const { return is_leaf(x) ? npos : x + 1; }

bp_tree::node bp_tree::last_child(node x) const {
  if (is_leaf(x)) return npos;
  return find_open(find_close(x) - 1);
}

bp_tree::node bp_tree::next_sibling(node x) const {
  const size_t j = find_close(x) + 1;
  return j <= bits_.size() && bits_.get0(j - 1) ? j : npos;
}

bp_tree::node bp_tree::prev_sibling(node x) const {
  check_node(x);
  if (x == 1 || bits_.get0(x - 2)) return npos;
  return find_open(x - 1);
}

size_t bp_tree::preorder_rank(node x) const {
  check_node(x);
  return bits_.rank1(x);
}

bp_tree::node bp_tree::preorder_select(size_t k) const {
  if (k == 0 || k > node_count()) throw range_error("bp_tree::preorder_select " + std::to_string(k));
  return bits_.select1(k);
}

size_t bp_tree::leaf_rank_prefix(size_t i) const {
  const size_t w = i >> 6;
  const size_t sb = w / kLeafSuperWords;
  size_t r = leaf_super_[sb];
  for (size_t k = sb * kLeafSuperWords; k < w; ++k) r += static_cast<size_t>(std::popcount(leaf_word(k)));
  if ((i & 63) != 0) r += static_cast<size_t>(std::popcount(leaf_word(w) & bits::low_mask(i & 63)));
  return r;
}

size_t bp_tree::leaf_rank(node x) const {
  check_node(x);
  return leaf_rank_prefix(x);
}

bp_tree::node bp_tree::leaf_select(size_t r) const {
  if (r == 0 || r > leaf_count()) throw range_error("bp_tree::leaf_select " + std::to_string(r));
  size_t lo = 0;
  size_t hi = leaf_super_.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (leaf_super_[mid] < r) lo = mid; else hi = mid;
  }
  size_t remaining = r - 1 - leaf_super_[lo];
  for (size_t k = lo * kLeafSuperWords;; ++k) {
    const uint64_t lw = leaf_word(k);
    const auto c = static_cast<size_t>(std::popcount(lw));
    if (remaining < c) return k * 64 + bits::select_in_word(lw, static_cast<unsigned>(remaining)) + 1;
    remaining -= c;
  }
}

size_t bp_tree::depth(node x) const {
  check_node(x);
  return static_cast<size_t>(excess(x) - 1);
}

size_t bp_tree::subtree_size(node x) const { return (find_close(x) - x + 1) / 2; }

bp_tree::node bp_tree::leftmost_leaf(node x) const {
  check_node(x);
  return leaf_select(leaf_rank_prefix(x - 1) + 1);
}

bp_tree::node bp_tree::rightmost_leaf(node x) const { return leaf_select(leaf_rank_prefix(find_close(x))); }

bp_tree::node bp_tree::lca(node x, node y) const {
  check_node(x);
  check_node(y);
  if (x == y) return x;
  if (x > y) std::swap(x, y);
  if (y <= find_close(x)) return x;
  return parent(rmq(x, y) + 1);
}

void bp_tree::write(word_writer& w) const {
  bits_.write(w);
  w.put(leaves_);
  min_tree_.write(w);
  leaf_super_.write(w);
}

bp_tree bp_tree::read(word_reader& r) {
  bp_tree t;
  t.bits_ = bit_vector::read(r);
  t.leaves_ = r.get();
  t.min_tree_ = packed_int_array::read(r);
  t.leaf_super_ = packed_int_array::read(r);
  if (t.min_tree_.size() != 2 * t.leaves_ || t.leaves_ == 0 || t.leaf_super_.empty()) {
    throw format_error("bp_tree: inconsistent index");
  }
  return t;
}

}  // namespace topzdd
