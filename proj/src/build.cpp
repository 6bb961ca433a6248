#include "topzdd/build.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace topzdd {

spanning_tree extract_spanning_tree(const zdd_store& store, handle root) {
  spanning_tree t;
  t.universe = store.universe();
  if (zdd_store::is_terminal(root)) return t;
  const auto n = static_cast<uint32_t>(store.node_count(root));
  t.n = n;
  t.node.assign(n + 1, 0);
  t.label.assign(n + 1, 0);
  t.parent.assign(n + 1, 0);
  t.in_type.assign(n + 1, 0);
  t.children.assign(n + 1, {});
  t.succ.assign(n + 1, {0, 0});

  std::unordered_map<handle, uint32_t> pre;
  pre.reserve(n);
  pre.emplace(root, 1);
  t.node[1] = root;
  t.label[1] = store.label(root);
  uint32_t next = 2;

  struct frame {
    handle h;
    uint8_t edge;
  };
  std::vector<frame> stack{{root, 0}};
  while (!stack.empty()) {
    if (stack.back().edge == 2) {
      stack.pop_back();
      continue;
    }
    const uint8_t type = stack.back().edge++;
    const handle h = stack.back().h;
    const uint32_t u = pre.at(h);
    const handle g = type == 0 ? store.lo(h) : store.hi(h);
    if (zdd_store::is_terminal(g)) {
      const uint32_t d = g == kBottom ? t.bottom_code() : t.top_code();
      t.succ[u][type] = d;
      t.complement.push_back({u, d, type});
      continue;
    }
    const auto [it, fresh] = pre.try_emplace(g, next);
    const uint32_t v = it->second;
    t.succ[u][type] = v;
    if (!fresh) {
      t.complement.push_back({u, v, type});
      continue;
    }
    ++next;
    t.node[v] = g;
    t.label[v] = store.label(g);
    t.parent[v] = u;
    t.in_type[v] = type;
    t.children[u].push_back(v);
    stack.push_back({g, 0});
  }
  if (next != n + 1) throw invariant_error("spanning tree: reached " + std::to_string(next - 1) + " of " + std::to_string(n) + " nodes");
  return t;
}

namespace {

class greedy_builder {
 public:
  explicit greedy_builder(const spanning_tree& t) : t_(t) {}

  top_tree run() {
    const uint32_t n = t_.n;
    if (n < 2) throw invariant_error("top tree needs at least one spanning edge");
    kids_.assign(n + 1, {});
    tt_.leaf_of.assign(n + 1, top_tree::kNone);
    for (uint32_t x = 2; x <= n; ++x) {
      top_tree_vertex leaf;
      leaf.kind = merge_kind::leaf;
      leaf.top = t_.parent[x];
      leaf.bottom = t_.children[x].empty() ? 0 : x;
      leaf.size = 2;
      leaf.bottom_local = leaf.bottom ? 2 : 0;
      leaf.label_delta = t_.label[x] - t_.label[leaf.top];
      leaf.edge_type = t_.in_type[x];
      tt_.leaf_of[x] = add(std::move(leaf));
      kids_[t_.parent[x]].push_back(tt_.leaf_of[x]);
    }
    size_t clusters = n - 1;
    while (clusters > 1) {
      const size_t before = clusters;
      horizontal_sweep(clusters);
      vertical_sweep(clusters);
      if (clusters == before) throw invariant_error("greedy top tree made no progress");
      ++tt_.rounds;
    }
    tt_.root = kids_[1].front();
    tt_.v[tt_.root].parent = top_tree::kNone;
    for (uint32_t id = tt_.root + 1; id-- > 0;) {
      auto& x = tt_.v[id];
      if (x.kind == merge_kind::leaf) continue;
      tt_.v[x.left].depth = x.depth + 1;
      tt_.v[x.right].depth = x.depth + 1;
    }
    return std::move(tt_);
  }

 private:
  uint32_t add(top_tree_vertex x) {
    tt_.v.push_back(std::move(x));
    return static_cast<uint32_t>(tt_.v.size() - 1);
  }

  [[nodiscard]] uint32_t bottom(uint32_t id) const { return tt_.v[id].bottom; }

  uint32_t merge_horizontal(uint32_t a, uint32_t b) {
    const top_tree_vertex& A = tt_.v[a];
    const top_tree_vertex& B = tt_.v[b];
    if (A.top != B.top || (A.bottom != 0 && B.bottom != 0)) throw invariant_error("illegal horizontal merge");
    top_tree_vertex m;
    m.kind = merge_kind::horizontal;
    m.left = a;
    m.right = b;
    m.top = A.top;
    m.bottom = A.bottom ? A.bottom : B.bottom;
    m.size = A.size + B.size - 1;
    m.bottom_local = A.bottom ? A.bottom_local : (B.bottom ? B.bottom_local + A.size - 1 : 0);
    m.height = 1 + std::max(A.height, B.height);
    const uint32_t id = add(std::move(m));
    tt_.v[a].parent = id;
    tt_.v[b].parent = id;
    return id;
  }

  uint32_t merge_vertical(uint32_t a, uint32_t b) {
    const top_tree_vertex& A = tt_.v[a];
    const top_tree_vertex& B = tt_.v[b];
    if (A.bottom == 0 || A.bottom != B.top || kids_[A.bottom].size() != 1) throw invariant_error("illegal vertical merge");
    top_tree_vertex m;
    m.kind = merge_kind::vertical;
    m.left = a;
    m.right = b;
    m.top = A.top;
    m.bottom = B.bottom;
    m.size = A.size + B.size - 1;
    m.junction = A.bottom_local;
    m.label_delta = t_.label[A.bottom] - t_.label[A.top];
    m.bottom_local = B.bottom ? B.bottom_local + m.junction - 1 : 0;
    m.height = 1 + std::max(A.height, B.height);
    const uint32_t id = add(std::move(m));
    tt_.v[a].parent = id;
    tt_.v[b].parent = id;
    return id;
  }

  // adjacent sibling clusters, left to right, when one of the pair has no bottom
  void horizontal_sweep(size_t& clusters) {
    for (auto& list : kids_) {
      if (list.size() < 2) continue;
      std::vector<uint32_t> out;
      for (size_t i = 0; i < list.size();) {
        if (i + 1 < list.size() && (bottom(list[i]) == 0 || bottom(list[i + 1]) == 0)) {
          out.push_back(merge_horizontal(list[i], list[i + 1]));
          --clusters;
          i += 2;
        } else {
          out.push_back(list[i++]);
        }
      }
      list = std::move(out);
    }
  }

  // maximal chains through single-child boundary nodes, paired top-down
  void vertical_sweep(size_t& clusters) {
    std::vector<uint32_t> stack{1};
    while (!stack.empty()) {
      const uint32_t u = stack.back();
      stack.pop_back();
      for (size_t i = 0; i < kids_[u].size(); ++i) {
        std::vector<uint32_t> chain{kids_[u][i]};
        uint32_t b = bottom(chain.back());
        while (b != 0 && kids_[b].size() == 1) {
          chain.push_back(kids_[b].front());
          b = bottom(chain.back());
        }
        std::vector<uint32_t> merged;
        for (size_t j = 0; j < chain.size(); j += 2) {
          if (j + 1 == chain.size()) {
            merged.push_back(chain[j]);
            continue;
          }
          const uint32_t junction = bottom(chain[j]);
          merged.push_back(merge_vertical(chain[j], chain[j + 1]));
          kids_[junction].clear();
          --clusters;
        }
        kids_[u][i] = merged.front();
        for (size_t m = 0; m + 1 < merged.size(); ++m) kids_[bottom(merged[m])] = {merged[m + 1]};
        if (b != 0) stack.push_back(b);
      }
    }
  }

  const spanning_tree& t_;
  top_tree tt_;
  std::vector<std::vector<uint32_t>> kids_;  // clusters whose top is node u, in sibling order
};

// local preorder in the parent of `child` of the node at local preorder k in `child`
uint32_t lift(const top_tree& tt, uint32_t child, uint32_t k) {
  const top_tree_vertex& p = tt.v[tt.v[child].parent];
  if (p.kind == merge_kind::horizontal) {
    if (child == p.left || k == 1) return k;
    return k + tt.v[p.left].size - 1;
  }
  if (child == p.left) return k <= p.junction ? k : k + tt.v[p.right].size - 1;
  return k + p.junction - 1;
}

struct key_hash {
  size_t operator()(const std::vector<uint32_t>& key) const {
    uint64_t h = 0x84222325CBF29CE4ULL;
    for (uint32_t x : key) {
      h = (h ^ x) * 0x100000001B3ULL;
      h ^= h >> 32;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

top_tree build_top_tree(const spanning_tree& t) { return greedy_builder(t).run(); }

uint32_t local_preorder(const top_tree& tt, uint32_t x, uint32_t at) {
  if (tt.v[at].top == x) return 1;
  uint32_t cur = tt.leaf_of.at(x);
  uint32_t k = 2;
  while (cur != at) {
    if (tt.v[cur].parent == top_tree::kNone) throw invariant_error("local_preorder: node outside cluster");
    k = lift(tt, cur, k);
    cur = tt.v[cur].parent;
  }
  return k;
}

std::vector<spanning_tree::edge> place_complement_edges(const spanning_tree& t, top_tree& tt) {
  std::vector<spanning_tree::edge> root_edges;
  for (const auto& e : t.complement) {
    if (e.src == 1) {
      root_edges.push_back(e);
      continue;
    }
    if (t.is_terminal(e.dst)) {
      auto& leaf = tt.v[tt.leaf_of[e.src]];
      leaf.bag.push_back({2, e.dst == t.bottom_code() ? 3U : 4U, e.type});
      leaf.bag_global.push_back(e);
      continue;
    }
    uint32_t a = tt.leaf_of[e.src];
    uint32_t b = tt.leaf_of[e.dst];
    uint32_t ka = 2;
    uint32_t kb = 2;
    while (tt.v[a].depth > tt.v[b].depth) {
      ka = lift(tt, a, ka);
      a = tt.v[a].parent;
    }
    while (tt.v[b].depth > tt.v[a].depth) {
      kb = lift(tt, b, kb);
      b = tt.v[b].parent;
    }
    while (a != b) {
      ka = lift(tt, a, ka);
      a = tt.v[a].parent;
      kb = lift(tt, b, kb);
      b = tt.v[b].parent;
    }
    tt.v[a].bag.push_back({ka, kb, e.type});
    tt.v[a].bag_global.push_back(e);
  }
  for (auto& x : tt.v) {
    if (x.bag.size() < 2) continue;
    std::vector<size_t> order(x.bag.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
      return std::pair(x.bag[i].src, x.bag[i].type) < std::pair(x.bag[j].src, x.bag[j].type);
    });
    std::vector<bag_entry> bag;
    std::vector<spanning_tree::edge> global;
    for (size_t i : order) {
      if (!bag.empty() && bag.back().src == x.bag[i].src && bag.back().type == x.bag[i].type) {
        throw invariant_error("complement bag holds two edges with the same source and type");
      }
      bag.push_back(x.bag[i]);
      global.push_back(x.bag_global[i]);
    }
    x.bag = std::move(bag);
    x.bag_global = std::move(global);
  }
  return root_edges;
}

top_dag dag_compress(top_tree& tt, std::vector<spanning_tree::edge> root_edges) {
  top_dag d;
  d.cls.resize(tt.v.size());
  std::unordered_map<std::vector<uint32_t>, uint32_t, key_hash> classes;
  std::vector<uint32_t> key;
  // children precede parents in vertex order
  for (uint32_t id = 0; id < tt.v.size(); ++id) {
    const top_tree_vertex& x = tt.v[id];
    key.clear();
    if (x.kind == merge_kind::leaf) {
      key = {0, x.edge_type, x.label_delta};
    } else {
      key = {x.kind == merge_kind::vertical ? 1U : 2U, d.cls[x.left], d.cls[x.right], x.junction, x.label_delta};
    }
    for (const bag_entry& e : x.bag) {
      key.push_back(e.src);
      key.push_back(e.dst);
      key.push_back(e.type);
    }
    const auto [it, fresh] = classes.try_emplace(key, static_cast<uint32_t>(d.multiplicity.size()));
    if (fresh) {
      d.multiplicity.push_back(0);
      d.representative.push_back(id);
    }
    d.cls[id] = it->second;
    ++d.multiplicity[it->second];
  }
  for (uint32_t id = 0; id < tt.v.size(); ++id) {
    top_tree_vertex& x = tt.v[id];
    if (d.multiplicity[d.cls[id]] != 1 || x.bag.empty()) continue;
    root_edges.insert(root_edges.end(), x.bag_global.begin(), x.bag_global.end());
    x.bag.clear();
    x.bag_global.clear();
  }
  std::sort(root_edges.begin(), root_edges.end(),
            [](const auto& a, const auto& b) { return std::pair(a.src, a.type) < std::pair(b.src, b.type); });
  d.root_edges = std::move(root_edges);
  return d;
}

namespace {

void encode_root_edges(top_zdd_parts& p, uint32_t n, const std::vector<spanning_tree::edge>& edges) {
  std::vector<uint64_t> counts(n, 0);
  for (const auto& e : edges) {
    ++counts[e.src - 1];
    p.dst_root.push_back(e.dst);
    p.type_root.push_back(e.type != 0);
  }
  p.b_src_root = unary_code(counts);
}

}  // namespace

top_zdd encode(const spanning_tree& t, const top_tree& tt, const top_dag& dag) {
  top_zdd_parts p;
  p.form = top_zdd::shape::normal;
  p.n = t.n;
  p.universe = t.universe;
  p.root_label = t.label[1];

  std::vector<uint32_t> real_preorder(dag.classes(), 0);
  std::vector<uint64_t> bag_counts;
  uint32_t real = 0;
  uint64_t dummy_mass = 0;

  auto emit_bag = [&](const top_tree_vertex& x) {
    bag_counts.push_back(x.bag.size());
    for (const bag_entry& e : x.bag) {
      p.src_in.push_back(e.src);
      p.dst_in.push_back(e.dst);
      p.type_in.push_back(e.type != 0);
    }
  };

  struct item {
    uint32_t cls;
    bool closing;
  };
  std::vector<item> stack{{dag.cls[tt.root], false}};
  while (!stack.empty()) {
    const item it = stack.back();
    stack.pop_back();
    if (it.closing) {
      p.bp.push_back(false);
      continue;
    }
    p.bp.push_back(true);
    if (real_preorder[it.cls] != 0) {
      p.bp.push_back(false);
      p.b_dummy.push_back(true);
      p.dst_dummy.push_back(real_preorder[it.cls]);
      dummy_mass += tt.v[dag.representative[it.cls]].size;
      p.clsize.push_back(dummy_mass);
      bag_counts.push_back(0);
      continue;
    }
    real_preorder[it.cls] = ++real;
    const top_tree_vertex& x = tt.v[dag.representative[it.cls]];
    emit_bag(x);
    if (x.kind == merge_kind::leaf) {
      p.bp.push_back(false);
      p.b_dummy.push_back(false);
      p.label_span.push_back(x.label_delta);
      p.type_span.push_back(x.edge_type != 0);
      continue;
    }
    p.b_h.push_back(x.kind == merge_kind::horizontal);
    if (x.kind == merge_kind::vertical) {
      p.preorder_diff.push_back(x.junction);
      p.label_diff.push_back(x.label_delta);
    }
    stack.push_back({it.cls, true});
    stack.push_back({dag.cls[x.right], false});
    stack.push_back({dag.cls[x.left], false});
  }
  p.b_edge = unary_code(bag_counts);
  encode_root_edges(p, t.n, dag.root_edges);
  return encode_parts(std::move(p));
}

top_zdd compress(const zdd_store& store, handle root, build_stats* stats) {
  if (zdd_store::is_terminal(root)) {
    top_zdd_parts p;
    p.form = root == kBottom ? top_zdd::shape::bottom : top_zdd::shape::top;
    p.universe = store.universe();
    if (stats) *stats = build_stats{};
    return encode_parts(std::move(p));
  }
  const spanning_tree t = extract_spanning_tree(store, root);
  build_stats s;
  s.n = t.n;
  s.spanning_edges = t.n - 1;
  s.complement_edges = t.complement.size();
  if (t.n == 1) {
    top_zdd_parts p;
    p.form = top_zdd::shape::single;
    p.n = 1;
    p.universe = t.universe;
    p.root_label = t.label[1];
    auto edges = t.complement;
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.type < b.type; });
    encode_root_edges(p, 1, edges);
    s.root_edges = edges.size();
    if (stats) *stats = s;
    return encode_parts(std::move(p));
  }
  top_tree tt = build_top_tree(t);
  auto root_edges = place_complement_edges(t, tt);
  const top_dag dag = dag_compress(tt, std::move(root_edges));
  top_zdd z = encode(t, tt, dag);
  if (stats) {
    s.top_tree_vertices = tt.v.size();
    s.top_tree_height = tt.height();
    s.greedy_rounds = tt.rounds;
    s.dag_classes = dag.classes();
    s.tprime_vertices = z.vertex_count();
    s.dummies = z.dummy_count();
    s.root_edges = z.root_edge_count();
    s.inner_edges = z.inner_edge_count();
    *stats = s;
  }
  return z;
}

}  // namespace topzdd
