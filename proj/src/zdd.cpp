#include "topzdd/zdd.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace topzdd {

size_t zdd_store::triple_hash::operator()(const zdd_node& n) const {
  uint64_t h = (static_cast<uint64_t>(n.lo) << 32) ^ n.hi;
  h ^= static_cast<uint64_t>(n.label) * 0x9E3779B97F4A7C15ULL;
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 29;
  return static_cast<size_t>(h);
}

zdd_store::zdd_store(element universe) : universe_(universe) {
  if (universe == 0 || universe == UINT32_MAX) throw invariant_error("zdd_store: universe must be in [1, 2^32-2]");
  nodes_.push_back({universe + 1, kBottom, kBottom});
  nodes_.push_back({universe + 1, kTop, kTop});
}

handle zdd_store::make_node(element label, handle lo, handle hi) {
  if (label == 0 || label > universe_) {
    throw invariant_error("make_node: label " + std::to_string(label) + " outside universe");
  }
  if (lo >= nodes_.size() || hi >= nodes_.size()) throw invariant_error("make_node: unknown child handle");
  if (label >= nodes_[lo].label || label >= nodes_[hi].label) {
    throw invariant_error("make_node: ordering violated at label " + std::to_string(label));
  }
  if (hi == kBottom) return lo;
  const zdd_node key{label, lo, hi};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (nodes_.size() >= UINT32_MAX) throw capacity_error("zdd_store: handle space exhausted");
  const auto h = static_cast<handle>(nodes_.size());
  nodes_.push_back(key);
  unique_.emplace(key, h);
  return h;
}

handle zdd_store::apply(set_op op, handle f, handle g) {
  if (f >= nodes_.size() || g >= nodes_.size()) throw invariant_error("apply: handle from another store");
  return apply_rec(op, f, g);
}

handle zdd_store::apply_rec(set_op op, handle f, handle g) {
  switch (op) {
    case set_op::unite:
      if (f == kBottom) return g;
      if (g == kBottom || f == g) return f;
      if (f > g) std::swap(f, g);
      break;
    case set_op::intersect:
      if (f == kBottom || g == kBottom) return kBottom;
      if (f == g) return f;
      if (f > g) std::swap(f, g);
      break;
    case set_op::subtract:
      if (f == kBottom || f == g) return kBottom;
      if (g == kBottom) return f;
      break;
  }
  auto& cache = apply_cache_[static_cast<int>(op)];
  const uint64_t key = (static_cast<uint64_t>(f) << 32) | g;
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const zdd_node nf = nodes_[f];
  const zdd_node ng = nodes_[g];
  handle r = kBottom;
  if (nf.label < ng.label) {
    switch (op) {
      case set_op::unite: r = make_node(nf.label, apply_rec(op, nf.lo, g), nf.hi); break;
      case set_op::intersect: r = apply_rec(op, nf.lo, g); break;
      case set_op::subtract: r = make_node(nf.label, apply_rec(op, nf.lo, g), nf.hi); break;
    }
  } else if (ng.label < nf.label) {
    switch (op) {
      case set_op::unite: r = make_node(ng.label, apply_rec(op, f, ng.lo), ng.hi); break;
      case set_op::intersect: r = apply_rec(op, f, ng.lo); break;
      case set_op::subtract: r = apply_rec(op, f, ng.lo); break;
    }
  } else {
    // equal labels; both branching since terminals were handled above
    const handle lo = apply_rec(op, nf.lo, ng.lo);
    const handle hi = apply_rec(op, nf.hi, ng.hi);
    r = make_node(nf.label, lo, hi);
  }
  cache.emplace(key, r);
  return r;
}

handle zdd_store::single_set(std::span<const element> s) {
  std::vector<element> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  handle h = kTop;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) h = make_node(*it, kBottom, h);
  return h;
}

handle zdd_store::power_set(element first, element last) {
  handle h = kTop;
  for (element e = last; e >= first && e > 0; --e) h = make_node(e, h, h);
  return h;
}

handle zdd_store::from_sets(const set_list& sets) {
  set_list sorted = sets;
  for (auto& s : sorted) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && (s.front() == 0 || s.back() > universe_)) throw invariant_error("from_sets: element outside universe");
  }
  std::vector<uint32_t> idx(sorted.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<uint32_t>(i);
  return from_sets_rec(sorted, idx, 0, idx.size(), 0);
}

// idx[begin, end) are sets sharing their first `depth` elements (already consumed).
handle zdd_store::from_sets_rec(const set_list& sets, std::vector<uint32_t>& idx, size_t begin, size_t end,
                                size_t depth) {
  if (begin == end) return kBottom;
  element m = universe_ + 1;
  for (size_t k = begin; k < end; ++k) {
    const auto& s = sets[idx[k]];
    if (s.size() > depth) m = std::min(m, s[depth]);
  }
  if (m == universe_ + 1) return kTop;
  // move sets whose next element is m to the back
  auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                   idx.begin() + static_cast<std::ptrdiff_t>(end), [&](uint32_t i) {
                                     const auto& s = sets[i];
                                     return !(s.size() > depth && s[depth] == m);
                                   });
  const auto split = static_cast<size_t>(mid - idx.begin());
  const handle hi = from_sets_rec(sets, idx, split, end, depth + 1);
  const handle lo = from_sets_rec(sets, idx, begin, split, depth);
  return make_node(m, lo, hi);
}

bool zdd_store::member(handle f, std::span<const element> s) const {
  handle v = f;
  size_t i = 0;
  while (!is_terminal(v)) {
    const zdd_node& n = nodes_[v];
    if (i < s.size() && s[i] < n.label) return false;  // required label skipped
    if (i < s.size() && s[i] == n.label) {
      v = n.hi;
      ++i;
    } else {
      v = n.lo;
    }
  }
  return v == kTop && i == s.size();
}

big_count zdd_store::count_sets(handle f) const {
  std::unordered_map<handle, big_count> memo;
  // explicit post-order so deep chains do not exhaust the stack
  std::vector<std::pair<handle, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (is_terminal(v) || memo.contains(v)) continue;
    const zdd_node& n = nodes_[v];
    if (!expanded) {
      stack.emplace_back(v, true);
      stack.emplace_back(n.lo, false);
      stack.emplace_back(n.hi, false);
      continue;
    }
    auto count = [&](handle h) -> big_count { return h == kBottom ? 0 : h == kTop ? 1 : memo.at(h); };
    memo.emplace(v, count(n.lo) + count(n.hi));
  }
  return f == kBottom ? big_count(0) : f == kTop ? big_count(1) : memo.at(f);
}

set_list zdd_store::enumerate(handle f, uint64_t limit) const {
  if (count_sets(f) > limit) throw capacity_error("enumerate: family larger than limit " + std::to_string(limit));
  set_list out;
  std::vector<element> current;
  // lo branch first yields characteristic-vector order
  auto rec = [&](auto&& self, handle v) -> void {
    if (v == kBottom) return;
    if (v == kTop) {
      out.push_back(current);
      return;
    }
    const zdd_node& n = nodes_[v];
    self(self, n.lo);
    current.push_back(n.label);
    self(self, n.hi);
    current.pop_back();
  };
  rec(rec, f);
  return out;
}

size_t zdd_store::node_count(handle f) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<handle> stack{f};
  size_t n = 0;
  while (!stack.empty()) {
    const handle v = stack.back();
    stack.pop_back();
    if (is_terminal(v) || seen[v]) continue;
    seen[v] = true;
    ++n;
    stack.push_back(nodes_[v].lo);
    stack.push_back(nodes_[v].hi);
  }
  return n;
}

void zdd_store::audit() const {
  if (nodes_.size() < 2 || nodes_[0].label != universe_ + 1 || nodes_[1].label != universe_ + 1) {
    throw invariant_error("audit: terminal nodes damaged");
  }
  std::unordered_map<zdd_node, handle, triple_hash, triple_eq> seen;
  for (handle h = 2; h < nodes_.size(); ++h) {
    const zdd_node& n = nodes_[h];
    if (n.lo >= h || n.hi >= h) throw invariant_error("audit: child created after parent");
    if (n.hi == kBottom) throw invariant_error("audit: node with 1-edge to bottom");
    if (n.label >= nodes_[n.lo].label || n.label >= nodes_[n.hi].label) throw invariant_error("audit: ordering");
    if (!seen.emplace(n, h).second) throw invariant_error("audit: duplicate node");
  }
}

uint64_t naive_size_bytes(uint64_t n, uint64_t c) {
  if (n == 0) return 0;
  const uint64_t log_n = static_cast<uint64_t>(std::bit_width(n)) - 1;
  const uint64_t log_c = static_cast<uint64_t>(std::bit_width(c)) - 1;
  const uint64_t bits = 2 * n * log_n + n * log_c;
  return (bits + 7) / 8;
}

void write_family_text(std::ostream& os, const zdd_store& store, handle f, uint64_t limit) {
  os << "c=" << store.universe() << '\n';
  for (const auto& s : store.enumerate(f, limit)) {
    for (size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << '\n';
  }
}

text_family read_family_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("c=", 0) != 0) throw parse_error("family text: missing c=<universe> header");
  text_family out{};
  try {
    out.universe = static_cast<element>(std::stoul(line.substr(2)));
  } catch (const std::exception&) {
    throw parse_error("family text: bad universe in header '" + line + "'");
  }
  if (out.universe == 0) throw parse_error("family text: universe must be positive");
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<element> s;
    std::string tok;
    while (ls >> tok) {
      size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v == 0 || v > out.universe) {
        throw parse_error("family text line " + std::to_string(lineno) + ": bad element '" + tok + "'");
      }
      if (!s.empty() && v <= s.back()) {
        throw parse_error("family text line " + std::to_string(lineno) + ": elements must be strictly ascending");
      }
      s.push_back(static_cast<element>(v));
    }
    out.sets.push_back(std::move(s));
  }
  return out;
}

}  // namespace topzdd
