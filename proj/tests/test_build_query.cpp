#include <doctest.h>

#include <cmath>
#include <random>

#include "family_oracles.hpp"
#include "structure_oracles.hpp"
#include "topzdd/build.hpp"
#include "topzdd/families.hpp"

using namespace topzdd;
using topzdd::testing::reference_triples;
using topzdd::testing::tprime_positions;

namespace {

set_list random_family(std::mt19937_64& rng, uint32_t c, size_t count) {
  set_list out;
  std::uniform_int_distribution<uint64_t> pick(0, (uint64_t{1} << c) - 1);
  for (size_t i = 0; i < count; ++i) out.push_back(topzdd::testing::mask_to_set(pick(rng), c));
  return out;
}

void check_queries(const zdd_store& st, handle root) {
  const top_zdd z = compress(st, root);
  const auto ref = reference_triples(st, root);
  REQUIRE(z.node_count() == ref.size());
  CHECK(z.decompress_all() == ref);
  for (uint32_t x = 1; x <= z.node_count(); ++x) {
    CHECK(z.label(x) == ref[x - 1].label);
    CHECK(z.zero(x) == ref[x - 1].zero);
    CHECK(z.one(x) == ref[x - 1].one);
  }
}

std::vector<std::pair<std::unique_ptr<zdd_store>, handle>> small_suite() {
  std::vector<std::pair<std::unique_ptr<zdd_store>, handle>> out;
  for (const char* s : {"powerset:A=64", "bounded_range:A=60,B=20", "bounded_card:A=30,B=10",
                        "knapsack:A=30,W=50,C=200,seed=7", "matchings:complete=6", "matchings:grid=3",
                        "grid_paths:n=4", "nqueens:n=6"}) {
    auto bf = build_family(parse_family_spec(s));
    out.emplace_back(std::move(bf.store), bf.root);
  }
  return out;
}

}  // namespace

TEST_CASE("power set of three") {
  zdd_store st(3);
  const handle r = st.power_set(1, 3);
  const top_zdd z = compress(st, r);
  CHECK(z.form() == top_zdd::shape::normal);
  const std::vector<node_triple> expect = {{1, 2, 2}, {2, 3, 3}, {3, 5, 5}};
  CHECK(z.decompress_all() == expect);
  CHECK(z.zero(2) == 3);
  CHECK(z.one(2) == 3);
  CHECK(z.one(3) == z.top_code());
  CHECK(z.label(3) == 3);
}

TEST_CASE("shifted labels") {
  zdd_store st(9);
  const handle r = st.from_sets({{4, 6}, {5}, {4, 9}, {}});
  check_queries(st, r);
  const top_zdd z = compress(st, r);
  CHECK(z.root_label() == 4);
  const std::vector<element> a{4, 9};
  const std::vector<element> b{4, 5};
  CHECK(z.member(a));
  CHECK_FALSE(z.member(b));
}

TEST_CASE("degenerate shapes") {
  zdd_store st(4);
  const top_zdd bot = compress(st, kBottom);
  CHECK(bot.form() == top_zdd::shape::bottom);
  CHECK(bot.node_count() == 0);
  CHECK_FALSE(bot.member(std::vector<element>{}));
  CHECK(bot.decompress_all().empty());

  const top_zdd top = compress(st, kTop);
  CHECK(top.form() == top_zdd::shape::top);
  CHECK(top.member(std::vector<element>{}));
  CHECK_FALSE(top.member(std::vector<element>{1}));

  const handle one = st.from_sets({{2}});
  const top_zdd single = compress(st, one);
  CHECK(single.form() == top_zdd::shape::single);
  CHECK(single.label(1) == 2);
  CHECK(single.zero(1) == single.bottom_code());
  CHECK(single.one(1) == single.top_code());
  CHECK(single.member(std::vector<element>{2}));
  CHECK_FALSE(single.member(std::vector<element>{}));
  CHECK_THROWS_AS((void)single.cluster_size(1), range_error);
  CHECK_THROWS_AS((void)single.label(2), range_error);
  CHECK_THROWS_AS((void)single.child(1, 2), range_error);
}

TEST_CASE("random families decompress exactly") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    const uint32_t c = 4 + round % 9;
    zdd_store st(c);
    const handle r = st.from_sets(random_family(rng, c, 1 + rng() % 40));
    check_queries(st, r);
  }
}

TEST_CASE("membership matches explicit family") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    const uint32_t c = 6 + round % 5;
    zdd_store st(c);
    const auto sets = random_family(rng, c, 3 + rng() % 30);
    const auto expect = topzdd::testing::as_family(sets);
    const top_zdd z = compress(st, st.from_sets(sets));
    for (uint64_t mask = 0; mask < (uint64_t{1} << c); ++mask) {
      const auto s = topzdd::testing::mask_to_set(mask, c);
      CHECK(z.member(s) == (expect.count(s) == 1));
    }
  }
}

TEST_CASE("benchmark families decompress exactly") {
  for (auto& [st, r] : small_suite()) check_queries(*st, r);
}

TEST_CASE("cluster sizes agree with expansions") {
  std::mt19937_64 rng(3);
  auto suite = small_suite();
  for (int round = 0; round < 20; ++round) {
    auto st = std::make_unique<zdd_store>(10);
    const handle r = st->from_sets(random_family(rng, 10, 5 + rng() % 60));
    suite.emplace_back(std::move(st), r);
  }
  for (auto& [st, r] : suite) {
    const top_zdd z = compress(*st, r);
    if (z.form() != top_zdd::shape::normal) continue;
    for (size_t pos : tprime_positions(z)) {
      if (z.is_dummy(pos)) {
        CHECK_THROWS_AS((void)z.cluster_size(pos), invariant_error);
        const auto a = z.expand_cluster(pos);
        const auto b = z.expand_cluster(z.resolve(pos));
        CHECK(a.rel_label == b.rel_label);
        CHECK(a.succ == b.succ);
        continue;
      }
      CHECK(z.cluster_size(pos) == z.expand_cluster(pos).rel_label.size());
    }
    CHECK(z.cluster_size(z.tree().root()) == z.node_count());
  }
}

TEST_CASE("top tree invariants") {
  for (auto& [st, r] : small_suite()) {
    const spanning_tree t = extract_spanning_tree(*st, r);
    top_tree tt = build_top_tree(t);
    REQUIRE(tt.root != top_tree::kNone);
    CHECK(tt.v[tt.root].size == t.n);
    CHECK(tt.v.size() == 2 * (t.n - 1) - 1);
    for (const auto& x : tt.v) {
      if (x.kind == merge_kind::leaf) {
        CHECK(x.size == 2);
        continue;
      }
      CHECK(x.size == tt.v[x.left].size + tt.v[x.right].size - 1);
      CHECK(x.height == 1 + std::max(tt.v[x.left].height, tt.v[x.right].height));
      if (x.kind == merge_kind::vertical) {
        CHECK(tt.v[x.left].bottom == tt.v[x.right].top);
        CHECK(local_preorder(tt, tt.v[x.left].bottom, tt.v[x.left].parent) == x.junction);
      } else {
        CHECK(tt.v[x.left].top == tt.v[x.right].top);
        CHECK((tt.v[x.left].bottom == 0 || tt.v[x.right].bottom == 0));
      }
    }
    // the root cluster's local preorder is the global DFS preorder
    for (uint32_t x = 1; x <= t.n; ++x) CHECK(local_preorder(tt, x, tt.root) == x);
    CHECK(tt.height() <= 6 * std::log2(static_cast<double>(t.n - 1)));

    const auto root_edges = place_complement_edges(t, tt);
    size_t bagged = root_edges.size();
    for (const auto& x : tt.v) bagged += x.bag.size();
    CHECK(bagged == t.complement.size());
  }
}

TEST_CASE("query descent stays within twice the tree height") {
  for (auto& [st, r] : small_suite()) {
    build_stats s;
    const top_zdd z = compress(*st, r, &s);
    query_trace trace;
    for (uint32_t x = 1; x <= z.node_count(); ++x) {
      (void)z.label(x, &trace);
      (void)z.zero(x, &trace);
      (void)z.one(x, &trace);
    }
    CHECK(trace.max_descent <= 2 * s.top_tree_height + 1);
    CHECK(trace.steps > 0);
  }
}

TEST_CASE("node outside range is rejected") {
  zdd_store st(5);
  const top_zdd z = compress(st, st.power_set(1, 5));
  CHECK_THROWS_AS((void)z.label(0), range_error);
  CHECK_THROWS_AS((void)z.zero(6), range_error);
  CHECK_THROWS_AS((void)z.one(7), range_error);
}

TEST_CASE("spanning tree of small chains") {
  zdd_store st(3);
  const spanning_tree t = extract_spanning_tree(st, st.power_set(1, 3));
  REQUIRE(t.n == 3);
  CHECK(t.parent[2] == 1);
  CHECK(t.parent[3] == 2);
  CHECK(t.in_type[2] == 0);
  CHECK(t.in_type[3] == 0);
  // two 1-edges of the chain plus both edges of node 3 into ⊤
  CHECK(t.complement.size() == 4);
  size_t terminal = 0;
  for (const auto& e : t.complement) terminal += t.is_terminal(e.dst) ? 1 : 0;
  CHECK(terminal == 2);
  CHECK(t.n - 1 + t.complement.size() == 2 * t.n);

  zdd_store one(1);
  const spanning_tree s = extract_spanning_tree(one, one.from_sets({{1}}));
  CHECK(s.n == 1);
  CHECK(s.complement.size() == 2);
}

TEST_CASE("two-edge trees") {
  zdd_store st(3);
  const top_tree path = build_top_tree(extract_spanning_tree(st, st.power_set(1, 3)));
  CHECK(path.height() == 1);
  CHECK(path.v[path.root].kind == merge_kind::vertical);

  // root 1 reaches node 3 by its 0-edge and node 2 by its 1-edge
  const top_tree star = build_top_tree(extract_spanning_tree(st, st.from_sets({{1, 2}, {3}})));
  CHECK(star.height() == 1);
  CHECK(star.v[star.root].kind == merge_kind::horizontal);
}

TEST_CASE("chains of identical edges") {
  for (uint32_t m = 2; m <= 10; ++m) {
    const uint32_t a = (1U << m) + 1;
    zdd_store st(a);
    build_stats s;
    (void)compress(st, st.power_set(1, a), &s);
    CHECK(s.spanning_edges == (1U << m));
    CHECK(s.top_tree_height == m);
    CHECK(s.dag_classes <= 3 * m + 3);
  }
}

TEST_CASE("power set of four") {
  zdd_store st(4);
  const top_zdd z = compress(st, st.power_set(1, 4));
  // V(V(e2, e3), e4) with e2 and e3 identical
  CHECK(z.vertex_count() == 5);
  CHECK(z.dummy_count() == 1);
  CHECK(z.vertical_count() == 2);
  CHECK(z.zero(2) == 3);
  CHECK(z.one(2) == 3);
  CHECK(z.zero(4) == z.top_code());
  CHECK(z.one(4) == z.top_code());
  for (size_t pos : tprime_positions(z)) {
    if (z.tree().is_leaf(pos) && !z.is_dummy(pos)) CHECK(z.cluster_size(pos) == 2);
  }
  CHECK(z.cluster_size(z.tree().first_child(z.tree().root())) == 3);

  zdd_store big(8);
  const top_zdd p8 = compress(big, big.power_set(1, 8));
  for (uint32_t x = 1; x <= 8; ++x) CHECK(p8.label(x) == x);
}

TEST_CASE("complement edges sit in clusters holding both endpoints") {
  std::mt19937_64 rng(200);
  for (int round = 0; round < 10; ++round) {
    zdd_store st(14);
    const handle r = st.from_sets(random_family(rng, 14, 40));
    const spanning_tree t = extract_spanning_tree(st, r);
    if (t.n < 2) continue;
    top_tree tt = build_top_tree(t);
    const auto root_edges = place_complement_edges(t, tt);
    for (const auto& e : root_edges) CHECK(e.src == 1);
    for (uint32_t id = 0; id < tt.v.size(); ++id) {
      const auto& x = tt.v[id];
      for (size_t i = 0; i < x.bag.size(); ++i) {
        const auto& g = x.bag_global[i];
        CHECK(local_preorder(tt, g.src, id) == x.bag[i].src);
        if (t.is_terminal(g.dst)) {
          CHECK(x.bag[i].dst == x.size + (g.dst == t.bottom_code() ? 1U : 2U));
        } else {
          CHECK(local_preorder(tt, g.dst, id) == x.bag[i].dst);
        }
      }
    }
  }
}

TEST_CASE("T' expands back to the top tree") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 15; ++round) {
    zdd_store st(12);
    const handle r = st.from_sets(random_family(rng, 12, 10 + rng() % 50));
    const spanning_tree t = extract_spanning_tree(st, r);
    if (t.n < 2) continue;
    const top_tree tt = build_top_tree(t);
    const top_zdd z = compress(st, r);
    const bp_tree& bp = z.tree();
    std::vector<std::pair<uint32_t, size_t>> todo{{tt.root, bp.root()}};
    size_t visited = 0;
    while (!todo.empty()) {
      const auto [id, at] = todo.back();
      todo.pop_back();
      const size_t pos = z.resolve(at);
      const auto& x = tt.v[id];
      ++visited;
      CHECK(z.cluster_size(pos) == x.size);
      REQUIRE(bp.is_leaf(pos) == (x.kind == merge_kind::leaf));
      if (x.kind == merge_kind::leaf) {
        const auto e = z.expand_cluster(pos);
        CHECK(e.rel_label[1] == x.label_delta);
        CHECK(e.succ[0][x.edge_type] == 2);
        continue;
      }
      const size_t left = bp.first_child(pos);
      todo.emplace_back(x.left, left);
      todo.emplace_back(x.right, bp.next_sibling(left));
    }
    CHECK(visited == tt.v.size());
  }
}
