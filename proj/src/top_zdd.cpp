#include "topzdd/top_zdd.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace topzdd {

const std::array<std::string_view, top_zdd::kComponents> top_zdd::kComponentNames = {
    "bp",         "B_dummy",  "clsize",   "label_span", "type_span", "B_H",    "preorder_diff", "label_diff",
    "B_src_root", "dst_root", "type_root", "B_edge",    "src_in",    "dst_in", "type_in",       "dst_dummy"};

std::vector<node_triple> preorder_edge_list(const zdd_store& store, handle root) {
  if (zdd_store::is_terminal(root)) return {};
  std::unordered_map<handle, uint32_t> pre;
  std::vector<handle> order;
  // recursive-order DFS, 0-edge first
  std::vector<std::pair<handle, int>> stack{{root, 0}};
  pre.emplace(root, 1);
  order.push_back(root);
  while (!stack.empty()) {
    auto& [h, e] = stack.back();
    if (e == 2) {
      stack.pop_back();
      continue;
    }
    const handle g = e++ == 0 ? store.lo(h) : store.hi(h);
    if (zdd_store::is_terminal(g) || pre.contains(g)) continue;
    pre.emplace(g, static_cast<uint32_t>(order.size() + 1));
    order.push_back(g);
    stack.emplace_back(g, 0);
  }
  const auto n = static_cast<uint32_t>(order.size());
  auto name = [&](handle g) { return g == kBottom ? n + 1 : g == kTop ? n + 2 : pre.at(g); };
  std::vector<node_triple> out;
  out.reserve(n);
  for (handle h : order) out.push_back({store.label(h), name(store.lo(h)), name(store.hi(h))});
  return out;
}

top_zdd encode_parts(top_zdd_parts&& p) {
  top_zdd z;
  z.shape_ = p.form;
  z.n_ = p.n;
  z.universe_ = p.universe;
  z.root_label_ = p.root_label;
  if (!p.bp.empty()) z.bp_ = bp_tree(p.bp);
  z.b_dummy_ = bv_auto(p.b_dummy);
  z.clsize_ = packed_int_array(p.clsize);
  z.label_span_ = packed_int_array(p.label_span);
  z.type_span_ = bv_auto(p.type_span);
  z.b_h_ = bv_auto(p.b_h);
  z.preorder_diff_ = packed_int_array(p.preorder_diff);
  z.label_diff_ = packed_int_array(p.label_diff);
  z.b_src_root_ = bv_auto(p.b_src_root);
  z.dst_root_ = packed_int_array(p.dst_root);
  z.type_root_ = bv_auto(p.type_root);
  z.b_edge_ = bv_auto(p.b_edge);
  z.src_in_ = packed_int_array(p.src_in);
  z.dst_in_ = packed_int_array(p.dst_in);
  z.type_in_ = bv_auto(p.type_in);
  z.dst_dummy_ = packed_int_array(p.dst_dummy);
  z.audit();
  return z;
}

void top_zdd::audit() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw invariant_error(std::string("top_zdd audit: ") + what);
  };
  require(b_src_root_.size() - b_src_root_.ones() == n_, "B_src_root must hold one group per node");
  require(b_src_root_.ones() == dst_root_.size() && dst_root_.size() == type_root_.size(), "root edge lengths");
  for (size_t i = 0; i < dst_root_.size(); ++i) require(dst_root_[i] >= 1 && dst_root_[i] <= n_ + 2, "dst_root range");
  if (shape_ != shape::normal) {
    require(bp_.node_count() == 0 && b_dummy_.size() == 0 && src_in_.size() == 0 && b_edge_.size() == 0,
            "degenerate form carries tree components");
    require((shape_ == shape::single) == (n_ == 1), "degenerate node count");
    require(shape_ == shape::single || n_ == 0, "terminal form with nodes");
    require(shape_ != shape::single || dst_root_.size() == 2, "single node needs two root edges");
    return;
  }
  const size_t vertices = bp_.node_count();
  const size_t leaves = bp_.leaf_count();
  require(n_ >= 2, "normal form needs two nodes");
  require(b_dummy_.size() == leaves, "B_dummy length = leaf count");
  const size_t dummies = b_dummy_.ones();
  require(clsize_.size() == dummies && dst_dummy_.size() == dummies, "one clsize / dst_dummy entry per dummy");
  for (size_t i = 1; i < clsize_.size(); ++i) require(clsize_[i - 1] <= clsize_[i], "clsize nondecreasing");
  require(label_span_.size() == leaves - dummies && type_span_.size() == leaves - dummies, "span arrays per real leaf");
  require(b_h_.size() == vertices - leaves, "B_H per internal vertex");
  require(preorder_diff_.size() == b_h_.size() - b_h_.ones() && label_diff_.size() == preorder_diff_.size(),
          "vertical arrays per vertical vertex");
  require(b_edge_.size() - b_edge_.ones() == vertices, "B_edge group per vertex");
  require(b_edge_.ones() == src_in_.size() && src_in_.size() == dst_in_.size() && dst_in_.size() == type_in_.size(),
          "inner edge lengths");
  const size_t real = vertices - dummies;
  for (size_t i = 0; i < dst_dummy_.size(); ++i) require(dst_dummy_[i] >= 1 && dst_dummy_[i] <= real, "dst_dummy range");
}

bool top_zdd::is_dummy(size_t pos) const { return bp_.is_leaf(pos) && b_dummy_.access(bp_.leaf_rank(pos)); }

size_t top_zdd::position_of_real(size_t q) const {
  // smallest preorder p whose count of non-dummy vertices up to p reaches q
  auto real_upto = [&](size_t p) {
    const size_t pos = bp_.preorder_select(p);
    return p - b_dummy_.rank1(bp_.leaf_rank(pos));
  };
  size_t lo = q;
  size_t hi = std::min(q + dummy_count(), bp_.node_count());
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (real_upto(mid) >= q) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return bp_.preorder_select(lo);
}

size_t top_zdd::resolve(size_t pos) const {
  if (!is_dummy(pos)) return pos;
  const size_t j = b_dummy_.rank1(bp_.leaf_rank(pos));
  return position_of_real(dst_dummy_[j - 1]);
}

uint32_t top_zdd::leaf_index(size_t pos) const {
  const size_t lr = bp_.leaf_rank(pos);
  return static_cast<uint32_t>(lr - b_dummy_.rank1(lr));
}

bool top_zdd::is_horizontal(size_t pos) const {
  return b_h_.access(bp_.preorder_rank(pos) - bp_.leaf_rank(pos));
}

uint32_t top_zdd::vertical_index(size_t pos) const {
  return static_cast<uint32_t>(b_h_.rank0(bp_.preorder_rank(pos) - bp_.leaf_rank(pos)));
}

std::pair<size_t, size_t> top_zdd::bag_range(size_t pos) const {
  const size_t p = bp_.preorder_rank(pos);
  const size_t begin = p == 1 ? 0 : b_edge_.select0(p - 1) - (p - 1);
  const size_t end = b_edge_.select0(p) - p;
  return {begin, end};
}

size_t top_zdd::cluster_size(size_t pos) const {
  if (shape_ != shape::normal) throw range_error("cluster_size: no top tree in a degenerate top ZDD");
  if (is_dummy(pos)) throw invariant_error("cluster_size: dummy vertex");
  const size_t l = bp_.leaf_rank(bp_.leftmost_leaf(pos));
  const size_t r = bp_.leaf_rank(bp_.rightmost_leaf(pos));
  const size_t k = r - l + 1;
  const size_t d_before = b_dummy_.rank1(l - 1);
  const size_t d_upto = b_dummy_.rank1(r);
  const size_t c = k - (d_upto - d_before);
  const uint64_t mass = (d_upto ? clsize_[d_upto - 1] : 0) - (d_before ? clsize_[d_before - 1] : 0);
  return mass + 2 * c - (k - 1);
}

struct top_zdd::frame {
  size_t left;   // unresolved child positions
  size_t right;
  bool horizontal;
  uint32_t junction;
  bool went_right;
};

namespace {

// size of a child slot, following a dummy to its target
size_t slot_size(const top_zdd& z, size_t pos) { return z.cluster_size(z.resolve(pos)); }

}  // namespace

uint32_t top_zdd::unwind(const std::vector<frame>& path, size_t upto, uint32_t k) const {
  for (size_t i = upto; i-- > 0;) {
    const frame& f = path[i];
    if (f.horizontal) {
      if (f.went_right && k != 1) k += static_cast<uint32_t>(slot_size(*this, f.left)) - 1;
    } else if (f.went_right) {
      k += f.junction - 1;
    } else if (k > f.junction) {
      k += static_cast<uint32_t>(slot_size(*this, f.right)) - 1;
    }
  }
  return k;
}

element top_zdd::label(uint32_t x, query_trace* trace) const {
  if (x == 0 || x > n_) throw range_error("label: node " + std::to_string(x) + " outside 1.." + std::to_string(n_));
  if (shape_ == shape::single) return root_label_;
  size_t pos = bp_.root();
  uint32_t k = x;
  uint64_t s = root_label_;
  size_t descent = 0;
  auto enter = [&](size_t child) {
    ++descent;
    if (is_dummy(child)) {
      ++descent;
      if (trace) ++trace->dummy_hops;
      return resolve(child);
    }
    return child;
  };
  for (;;) {
    if (k == 1) break;
    if (bp_.is_leaf(pos)) {
      s += label_span_[leaf_index(pos) - 1];
      break;
    }
    const size_t v = bp_.first_child(pos);
    const size_t w = bp_.next_sibling(v);
    if (is_horizontal(pos)) {
      const auto cv = static_cast<uint32_t>(slot_size(*this, v));
      if (k <= cv) {
        pos = enter(v);
      } else {
        k = k - cv + 1;
        pos = enter(w);
      }
      continue;
    }
    const uint32_t j = vertical_index(pos);
    const auto d = static_cast<uint32_t>(preorder_diff_[j - 1]);
    if (k <= d) {
      pos = enter(v);
      continue;
    }
    const auto cw = static_cast<uint32_t>(slot_size(*this, w));
    if (k <= d + cw - 1) {
      k = k - d + 1;
      s += label_diff_[j - 1];
      pos = enter(w);
    } else {
      k = k - cw + 1;
      pos = enter(v);
    }
  }
  if (trace) {
    trace->steps += descent;
    trace->max_descent = std::max(trace->max_descent, descent);
  }
  return static_cast<element>(s);
}

uint32_t top_zdd::child(uint32_t x, uint8_t type, query_trace* trace) const {
  if (x == 0 || x > n_) throw range_error("child: node " + std::to_string(x) + " outside 1.." + std::to_string(n_));
  if (type > 1) throw range_error("child: edge type must be 0 or 1");

  const size_t root_begin = x == 1 ? 0 : b_src_root_.select0(x - 1) - (x - 1);
  const size_t root_end = b_src_root_.select0(x) - x;
  for (size_t i = root_begin; i < root_end; ++i) {
    if (type_root_.access(i + 1) == (type == 1)) return static_cast<uint32_t>(dst_root_[i]);
  }
  if (shape_ != shape::normal) throw invariant_error("child: edge missing from a single-node top ZDD");

  std::vector<frame> path;
  size_t descent = 0;
  auto enter = [&](size_t child_pos) {
    ++descent;
    if (is_dummy(child_pos)) {
      ++descent;
      if (trace) ++trace->dummy_hops;
      return resolve(child_pos);
    }
    return child_pos;
  };
  auto finish = [&]() {
    if (trace) {
      trace->steps += descent;
      trace->max_descent = std::max(trace->max_descent, descent);
    }
    descent = 0;
  };

  // spanning edge: find the single-edge cluster whose top is x
  size_t pos = bp_.root();
  uint32_t k = x;
  for (;;) {
    if (bp_.is_leaf(pos)) {
      if (k == 1 && type_span_.access(leaf_index(pos)) == (type == 1)) {
        finish();
        return unwind(path, path.size(), 2);
      }
      break;
    }
    frame f{bp_.first_child(pos), 0, is_horizontal(pos), 0, false};
    f.right = bp_.next_sibling(f.left);
    if (f.horizontal) {
      if (k == 1) {
        f.went_right = type == 1;  // both children of x meet here, 0-child first
      } else {
        const auto cv = static_cast<uint32_t>(slot_size(*this, f.left));
        f.went_right = k > cv;
        if (f.went_right) k = k - cv + 1;
      }
    } else {
      f.junction = static_cast<uint32_t>(preorder_diff_[vertical_index(pos) - 1]);
      if (k == f.junction) {
        f.went_right = true;
        k = 1;
      } else if (k > f.junction) {
        const auto cw = static_cast<uint32_t>(slot_size(*this, f.right));
        f.went_right = k <= f.junction + cw - 1;
        k = f.went_right ? k - f.junction + 1 : k - cw + 1;
      }
    }
    path.push_back(f);
    pos = enter(f.went_right ? f.right : f.left);
  }
  finish();

  // complement edge: walk toward the single-edge cluster whose bottom is x
  path.clear();
  pos = bp_.root();
  k = x;
  const uint64_t key = 2 * static_cast<uint64_t>(x) + type;
  for (;;) {
    auto [lo, hi] = bag_range(pos);
    const uint64_t want = 2 * static_cast<uint64_t>(k) + type;
    while (lo < hi) {
      const size_t mid = lo + (hi - lo) / 2;
      const uint64_t have = 2 * src_in_[mid] + (type_in_.access(mid + 1) ? 1 : 0);
      if (have < want) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    const auto [begin, end] = bag_range(pos);
    if (lo < end && src_in_[lo] == k && type_in_.access(lo + 1) == (type == 1)) {
      const auto dst = static_cast<uint32_t>(dst_in_[lo]);
      const auto size = static_cast<uint32_t>(cluster_size(pos));
      finish();
      if (dst == size + 1) return bottom_code();
      if (dst == size + 2) return top_code();
      return unwind(path, path.size(), dst);
    }
    (void)begin;
    if (bp_.is_leaf(pos)) break;
    frame f{bp_.first_child(pos), 0, is_horizontal(pos), 0, false};
    f.right = bp_.next_sibling(f.left);
    if (f.horizontal) {
      const auto cv = static_cast<uint32_t>(slot_size(*this, f.left));
      f.went_right = k > cv;
      if (f.went_right) k = k - cv + 1;
    } else {
      f.junction = static_cast<uint32_t>(preorder_diff_[vertical_index(pos) - 1]);
      if (k > f.junction) {
        const auto cw = static_cast<uint32_t>(slot_size(*this, f.right));
        f.went_right = k <= f.junction + cw - 1;
        k = f.went_right ? k - f.junction + 1 : k - cw + 1;
      }
    }
    path.push_back(f);
    pos = enter(f.went_right ? f.right : f.left);
  }
  finish();
  (void)key;
  throw invariant_error("child: no " + std::to_string(type) + "-edge stored for node " + std::to_string(x));
}

bool top_zdd::member(std::span<const element> s) const {
  if (shape_ == shape::bottom) return false;
  if (shape_ == shape::top) return s.empty();
  uint32_t x = 1;
  size_t i = 0;
  while (x <= n_) {
    const element l = label(x);
    if (i < s.size() && s[i] < l) return false;
    if (i < s.size() && s[i] == l) {
      x = one(x);
      ++i;
    } else {
      x = zero(x);
    }
  }
  return x == top_code() && i == s.size();
}

cluster_expansion top_zdd::expand_cluster(size_t pos) const {
  if (shape_ != shape::normal) throw range_error("expand_cluster: no top tree in a degenerate top ZDD");
  pos = resolve(pos);
  cluster_expansion e;
  if (bp_.is_leaf(pos)) {
    const uint32_t i = leaf_index(pos);
    e.rel_label = {0, static_cast<uint32_t>(label_span_[i - 1])};
    e.succ.assign(2, {0, 0});
    e.succ[0][type_span_.access(i) ? 1 : 0] = 2;
  } else {
    const size_t v = bp_.first_child(pos);
    const cluster_expansion a = expand_cluster(v);
    const cluster_expansion b = expand_cluster(bp_.next_sibling(v));
    const auto cv = static_cast<uint32_t>(a.rel_label.size());
    const auto cw = static_cast<uint32_t>(b.rel_label.size());
    const uint32_t size = cv + cw - 1;
    e.rel_label.assign(size, 0);
    e.succ.assign(size, {0, 0});
    const bool horizontal = is_horizontal(pos);
    uint32_t d = 0;
    uint32_t offset = 0;
    if (!horizontal) {
      const uint32_t j = vertical_index(pos);
      d = static_cast<uint32_t>(preorder_diff_[j - 1]);
      offset = static_cast<uint32_t>(label_diff_[j - 1]);
      if (a.rel_label.at(d - 1) != offset) throw invariant_error("expand_cluster: label_diff disagrees with left cluster");
    }
    auto map_left = [&](uint32_t k) { return horizontal || k <= d ? k : k + cw - 1; };
    auto map_right = [&](uint32_t k) { return horizontal ? (k == 1 ? 1 : k + cv - 1) : k + d - 1; };
    auto absorb = [&](const cluster_expansion& part, auto map, uint32_t label_offset) {
      for (uint32_t k = 1; k <= part.rel_label.size(); ++k) {
        const uint32_t m = map(k);
        e.rel_label[m - 1] = part.rel_label[k - 1] + label_offset;
        for (int t = 0; t < 2; ++t) {
          const uint32_t target = part.succ[k - 1][t];
          if (target == 0) continue;
          const uint32_t mapped = target >= cluster_expansion::kBotLocal ? target : map(target);
          if (e.succ[m - 1][t] != 0 && e.succ[m - 1][t] != mapped) throw invariant_error("expand_cluster: edge stored twice");
          e.succ[m - 1][t] = mapped;
        }
      }
    };
    absorb(a, map_left, 0);
    absorb(b, map_right, offset);
  }
  const auto size = static_cast<uint32_t>(e.rel_label.size());
  const auto [begin, end] = bag_range(pos);
  for (size_t i = begin; i < end; ++i) {
    const auto src = static_cast<uint32_t>(src_in_[i]);
    const auto dst = static_cast<uint32_t>(dst_in_[i]);
    const int t = type_in_.access(i + 1) ? 1 : 0;
    if (src == 0 || src > size || dst == 0 || dst > size + 2) throw invariant_error("expand_cluster: bag entry outside cluster");
    e.succ[src - 1][t] = dst == size + 1 ? cluster_expansion::kBotLocal : dst == size + 2 ? cluster_expansion::kTopLocal : dst;
  }
  return e;
}

std::vector<node_triple> top_zdd::decompress_all() const {
  std::vector<node_triple> out(n_, node_triple{0, 0, 0});
  if (n_ == 0) return out;
  if (shape_ == shape::normal) {
    const cluster_expansion e = expand_cluster(bp_.root());
    if (e.rel_label.size() != n_) throw invariant_error("decompress_all: root cluster size differs from n");
    auto global = [&](uint32_t v) {
      return v == cluster_expansion::kBotLocal ? bottom_code() : v == cluster_expansion::kTopLocal ? top_code() : v;
    };
    for (uint32_t x = 0; x < n_; ++x) {
      out[x] = {root_label_ + e.rel_label[x], global(e.succ[x][0]), global(e.succ[x][1])};
    }
  } else {
    out[0].label = root_label_;
  }
  for (uint32_t x = 1; x <= n_; ++x) {
    const size_t begin = x == 1 ? 0 : b_src_root_.select0(x - 1) - (x - 1);
    const size_t end = b_src_root_.select0(x) - x;
    for (size_t i = begin; i < end; ++i) {
      auto& slot = type_root_.access(i + 1) ? out[x - 1].one : out[x - 1].zero;
      if (slot != 0) throw invariant_error("decompress_all: edge stored twice");
      slot = static_cast<uint32_t>(dst_root_[i]);
    }
  }
  for (uint32_t x = 0; x < n_; ++x) {
    if (out[x].zero == 0 || out[x].one == 0) throw invariant_error("decompress_all: node " + std::to_string(x + 1) + " misses an edge");
  }
  return out;
}

std::array<uint64_t, top_zdd::kComponents> top_zdd::component_bits() const {
  word_writer w;
  std::array<uint64_t, kComponents> out{};
  write_components(w);
  word_reader r(w.words());
  for (size_t i = 0; i < kComponents; ++i) out[i] = r.get_array().size() * 64;
  return out;
}

std::vector<bit_encoding> top_zdd::bit_encodings() const {
  return {b_dummy_.encoding(), type_span_.encoding(), b_h_.encoding(),    b_src_root_.encoding(),
          type_root_.encoding(), b_edge_.encoding(),  type_in_.encoding()};
}

void top_zdd::write_components(word_writer& w) const {
  auto put = [&](const auto& part) {
    word_writer sub;
    part.write(sub);
    w.put_array(sub.words());
  };
  if (shape_ == shape::normal) {
    put(bp_);
  } else {
    w.put(0);
  }
  put(b_dummy_);
  put(clsize_);
  put(label_span_);
  put(type_span_);
  put(b_h_);
  put(preorder_diff_);
  put(label_diff_);
  put(b_src_root_);
  put(dst_root_);
  put(type_root_);
  put(b_edge_);
  put(src_in_);
  put(dst_in_);
  put(type_in_);
  put(dst_dummy_);
}

top_zdd top_zdd::from_components(shape form, uint32_t n, element universe, element root_label, word_reader& r) {
  top_zdd z;
  z.shape_ = form;
  z.n_ = n;
  z.universe_ = universe;
  z.root_label_ = root_label;
  z.read_components(r);
  try {
    z.audit();
  } catch (const invariant_error& e) {
    throw format_error(e.what());
  }
  return z;
}

void top_zdd::read_components(word_reader& r) {
  auto get = [&](auto& part) {
    const std::vector<uint64_t> words = r.get_array();
    word_reader sub(words);
    part = std::remove_reference_t<decltype(part)>::read(sub);
    if (!sub.at_end()) throw format_error("component has trailing words");
  };
  if (shape_ == shape::normal) {
    get(bp_);
  } else if (!r.get_array().empty()) {
    throw format_error("degenerate container carries a bp component");
  }
  get(b_dummy_);
  get(clsize_);
  get(label_span_);
  get(type_span_);
  get(b_h_);
  get(preorder_diff_);
  get(label_diff_);
  get(b_src_root_);
  get(dst_root_);
  get(type_root_);
  get(b_edge_);
  get(src_in_);
  get(dst_in_);
  get(type_in_);
  get(dst_dummy_);
}

}  // namespace topzdd
