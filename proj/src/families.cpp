#include "topzdd/families.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>

namespace topzdd {

namespace {

/// Top-down layered construction: element `level` is decided at depth
/// `level`; step returns the successor state or nullopt for ⊥. States that
/// survive the last level are passed to accept.
template <typename State, typename Hash, typename Step, typename Accept>
handle build_layered(zdd_store& store, element levels, const State& root, Step step, Accept accept) {
  std::vector<std::unordered_map<State, handle, Hash>> memo(levels + 2);
  std::function<handle(element, const State&)> rec = [&](element level, const State& s) -> handle {
    if (level > levels) return accept(s) ? kTop : kBottom;
    auto& table = memo[level];
    if (auto it = table.find(s); it != table.end()) return it->second;
    const std::optional<State> s0 = step(level, s, false);
    const std::optional<State> s1 = step(level, s, true);
    const handle lo = s0 ? rec(level + 1, *s0) : kBottom;
    const handle hi = s1 ? rec(level + 1, *s1) : kBottom;
    const handle h = store.make_node(level, lo, hi);
    table.emplace(s, h);
    return h;
  };
  return rec(1, root);
}

struct vec_hash {
  size_t operator()(const std::vector<uint64_t>& v) const {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (uint64_t x : v) {
      h ^= x;
      h *= 0x100000001B3ULL;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

void require_universe(const zdd_store& store, element needed) {
  if (store.universe() < needed) throw invariant_error("generator needs universe >= " + std::to_string(needed));
}

}  // namespace

graph complete_graph(uint32_t k) {
  graph g{k, {}};
  for (uint32_t u = 1; u <= k; ++u) {
    for (uint32_t v = u + 1; v <= k; ++v) g.edges.emplace_back(u, v);
  }
  return g;
}

graph path_graph(uint32_t k) {
  graph g{k, {}};
  for (uint32_t u = 1; u < k; ++u) g.edges.emplace_back(u, u + 1);
  return g;
}

graph grid_graph(uint32_t k) {
  graph g{k * k, {}};
  auto id = [k](uint32_t r, uint32_t c) { return r * k + c + 1; };
  for (uint32_t r = 0; r < k; ++r) {
    for (uint32_t c = 0; c < k; ++c) {
      if (c + 1 < k) g.edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < k) g.edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return g;
}

graph read_edge_list(std::istream& is) {
  graph g;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u = 0;
    long long v = 0;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest) || u <= 0 || v <= 0 || u == v || u > UINT32_MAX || v > UINT32_MAX) {
      throw parse_error("edge list line " + std::to_string(lineno) + ": expected two distinct positive vertex ids");
    }
    g.edges.emplace_back(static_cast<uint32_t>(u), static_cast<uint32_t>(v));
    g.vertices = std::max({g.vertices, static_cast<uint32_t>(u), static_cast<uint32_t>(v)});
  }
  if (g.edges.empty()) throw parse_error("edge list: no edges");
  return g;
}

std::vector<uint64_t> knapsack_weights(uint32_t a, uint64_t w, uint64_t seed) {
  splitmix64 rng(seed);
  std::vector<std::pair<uint64_t, uint32_t>> items(a);
  for (uint32_t i = 0; i < a; ++i) items[i] = {1 + rng.next() % w, i};
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<uint64_t> out(a);
  for (uint32_t i = 0; i < a; ++i) out[i] = items[i].first;
  return out;
}

handle gen_powerset(zdd_store& store, uint32_t a) {
  require_universe(store, a);
  return store.power_set(1, a);
}

handle gen_bounded_range(zdd_store& store, uint32_t a, uint32_t b) {
  require_universe(store, a);
  // state: -1 before the first element, else the last element index still allowed
  using state = int64_t;
  return build_layered<state, std::hash<state>>(
      store, a, state{-1},
      [&](element level, state s, bool take) -> std::optional<state> {
        if (!take) return s;
        if (s < 0) return static_cast<state>(level) + b;
        if (static_cast<state>(level) <= s) return s;
        return std::nullopt;
      },
      [](state) { return true; });
}

handle gen_bounded_card(zdd_store& store, uint32_t a, uint32_t b) {
  require_universe(store, a);
  using state = uint32_t;
  return build_layered<state, std::hash<state>>(
      store, a, state{0},
      [&](element, state s, bool take) -> std::optional<state> {
        if (!take) return s;
        if (s < b) return s + 1;
        return std::nullopt;
      },
      [](state) { return true; });
}

handle gen_knapsack_weights(zdd_store& store, const std::vector<uint64_t>& weights, uint64_t capacity) {
  const auto a = static_cast<uint32_t>(weights.size());
  require_universe(store, a);
  std::vector<uint64_t> suffix(a + 2, 0);  // suffix[j] = sum of weights of elements j..a
  for (uint32_t j = a; j >= 1; --j) suffix[j] = suffix[j + 1] + weights[j - 1];
  using state = uint64_t;
  return build_layered<state, std::hash<state>>(
      store, a, std::min(capacity, suffix[1]),
      [&](element level, state cap, bool take) -> std::optional<state> {
        state next = cap;
        if (take) {
          if (weights[level - 1] > cap) return std::nullopt;
          next = cap - weights[level - 1];
        }
        return std::min(next, suffix[level + 1]);
      },
      [](state) { return true; });
}

handle gen_knapsack(zdd_store& store, uint32_t a, uint64_t w, uint64_t capacity, uint64_t seed) {
  return gen_knapsack_weights(store, knapsack_weights(a, w, seed), capacity);
}

handle gen_matchings(zdd_store& store, const graph& g) {
  const auto m = static_cast<element>(g.edges.size());
  require_universe(store, m);
  const size_t words = (g.vertices + 64) / 64;
  // live[j] = vertices touched by edges j..m; the state forgets everything else
  std::vector<std::vector<uint64_t>> live(m + 2, std::vector<uint64_t>(words, 0));
  for (element j = m; j >= 1; --j) {
    live[j] = live[j + 1];
    for (uint32_t v : {g.edges[j - 1].first, g.edges[j - 1].second}) live[j][v / 64] |= uint64_t{1} << (v % 64);
  }
  using state = std::vector<uint64_t>;
  auto has = [](const state& s, uint32_t v) { return (s[v / 64] >> (v % 64)) & 1U; };
  return build_layered<state, vec_hash>(
      store, m, state(words, 0),
      [&](element level, const state& s, bool take) -> std::optional<state> {
        state next = s;
        if (take) {
          const auto [u, v] = g.edges[level - 1];
          if (has(s, u) || has(s, v)) return std::nullopt;
          next[u / 64] |= uint64_t{1} << (u % 64);
          next[v / 64] |= uint64_t{1} << (v % 64);
        }
        for (size_t k = 0; k < words; ++k) next[k] &= live[level + 1][k];
        return next;
      },
      [](const state&) { return true; });
}

set_list grid_path_sets(uint32_t n) {
  const graph g = grid_graph(n);
  std::vector<std::vector<std::pair<uint32_t, element>>> adj(g.vertices + 1);
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto [u, v] = g.edges[i];
    adj[u].emplace_back(v, static_cast<element>(i + 1));
    adj[v].emplace_back(u, static_cast<element>(i + 1));
  }
  const uint32_t source = (n - 1) * n + 1;  // bottom-left
  const uint32_t sink = n;                  // top-right
  set_list out;
  std::vector<bool> on_path(g.vertices + 1, false);
  std::vector<element> edges;
  auto dfs = [&](auto&& self, uint32_t v) -> void {
    if (v == sink) {
      out.push_back(edges);
      return;
    }
    on_path[v] = true;
    for (const auto& [w, e] : adj[v]) {
      if (on_path[w]) continue;
      edges.push_back(e);
      self(self, w);
      edges.pop_back();
    }
    on_path[v] = false;
  };
  dfs(dfs, source);
  return out;
}

handle gen_grid_paths(zdd_store& store, uint32_t n) {
  require_universe(store, 2 * n * (n - 1));
  return store.from_sets(grid_path_sets(n));
}

handle gen_nqueens(zdd_store& store, uint32_t n) {
  if (n == 0 || n > 20) throw invariant_error("nqueens: n must be in [1, 20]");
  require_universe(store, n * n);
  struct state {
    uint64_t cols = 0;
    uint64_t diag = 0;  // r + c
    uint64_t anti = 0;  // r - c + n - 1
    bool row_done = false;
    bool operator==(const state&) const = default;
  };
  struct state_hash {
    size_t operator()(const state& s) const {
      return std::hash<uint64_t>{}(s.cols * 0x9E3779B97F4A7C15ULL ^ (s.diag << 1) ^ (s.anti * 31) ^ s.row_done);
    }
  };
  return build_layered<state, state_hash>(
      store, n * n, state{},
      [&](element level, const state& s, bool take) -> std::optional<state> {
        const uint32_t r = (level - 1) / n;
        const uint32_t c = (level - 1) % n;
        state next = s;
        if (take) {
          const uint64_t cb = uint64_t{1} << c;
          const uint64_t db = uint64_t{1} << (r + c);
          const uint64_t ab = uint64_t{1} << (r + n - 1 - c);
          if (s.row_done || (s.cols & cb) || (s.diag & db) || (s.anti & ab)) return std::nullopt;
          next.cols |= cb;
          next.diag |= db;
          next.anti |= ab;
          next.row_done = true;
        }
        if (c == n - 1) {
          if (!next.row_done) return std::nullopt;
          next.row_done = false;
        }
        return next;
      },
      [](const state&) { return true; });
}

uint64_t family_spec::num(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw parse_error("family spec '" + text + "': missing parameter " + key);
  size_t used = 0;
  uint64_t v = 0;
  try {
    v = std::stoull(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size() || it->second.front() == '-') {
    throw parse_error("family spec '" + text + "': parameter " + key + " is not a non-negative integer");
  }
  return v;
}

const std::string& family_spec::str(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw parse_error("family spec '" + text + "': missing parameter " + key);
  return it->second;
}

family_spec parse_family_spec(const std::string& text) {
  static const std::map<std::string, std::pair<family_kind, std::vector<std::string>>> kinds = {
      {"powerset", {family_kind::powerset, {"A"}}},
      {"bounded_range", {family_kind::bounded_range, {"A", "B"}}},
      {"bounded_card", {family_kind::bounded_card, {"A", "B"}}},
      {"knapsack", {family_kind::knapsack, {"A", "W", "C", "seed"}}},
      {"matchings", {family_kind::matchings, {"graph", "complete", "grid", "path"}}},
      {"grid_paths", {family_kind::grid_paths, {"n"}}},
      {"nqueens", {family_kind::nqueens, {"n"}}},
      {"file", {family_kind::file, {"path"}}},
  };
  family_spec spec;
  spec.text = text;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto k = kinds.find(kind);
  if (k == kinds.end()) throw parse_error("family spec '" + text + "': unknown kind '" + kind + "'");
  spec.kind = k->second.first;
  if (colon != std::string::npos) {
    std::istringstream rest(text.substr(colon + 1));
    std::string kv;
    while (std::getline(rest, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw parse_error("family spec '" + text + "': expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const auto& allowed = k->second.second;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw parse_error("family spec '" + text + "': unknown parameter '" + key + "'");
      }
      spec.params[key] = kv.substr(eq + 1);
    }
  }
  switch (spec.kind) {
    case family_kind::powerset:
      if (spec.num("A") < 1) throw parse_error("powerset: A must be >= 1");
      break;
    case family_kind::bounded_range:
      if (spec.num("A") < 1 || spec.num("B") >= spec.num("A")) throw parse_error("bounded_range: need 0 <= B < A");
      break;
    case family_kind::bounded_card:
      if (spec.num("A") < 1 || spec.num("B") > spec.num("A")) throw parse_error("bounded_card: need 0 <= B <= A");
      break;
    case family_kind::knapsack:
      if (spec.num("A") < 1 || spec.num("W") < 1) throw parse_error("knapsack: need A >= 1, W >= 1");
      (void)spec.num("C");
      (void)spec.num("seed");
      break;
    case family_kind::matchings:
      if (spec.params.size() != 1) throw parse_error("matchings: give exactly one of graph=, complete=, grid=, path=");
      if (!spec.params.contains("graph") && spec.num(spec.params.begin()->first) < 2) {
        throw parse_error("matchings: generated graph needs >= 2 vertices");
      }
      break;
    case family_kind::grid_paths:
      if (spec.num("n") < 1 || spec.num("n") > 8) throw parse_error("grid_paths: n must be in [1, 8]");
      break;
    case family_kind::nqueens:
      if (spec.num("n") < 1 || spec.num("n") > 20) throw parse_error("nqueens: n must be in [1, 20]");
      break;
    case family_kind::file:
      (void)spec.str("path");
      break;
  }
  return spec;
}

namespace {

graph spec_graph(const family_spec& spec) {
  if (spec.params.contains("graph")) {
    std::ifstream in(spec.str("graph"));
    if (!in) throw parse_error("cannot open graph file " + spec.str("graph"));
    return read_edge_list(in);
  }
  if (spec.params.contains("complete")) return complete_graph(static_cast<uint32_t>(spec.num("complete")));
  if (spec.params.contains("grid")) return grid_graph(static_cast<uint32_t>(spec.num("grid")));
  return path_graph(static_cast<uint32_t>(spec.num("path")));
}

text_family spec_text_family(const family_spec& spec) {
  std::ifstream in(spec.str("path"));
  if (!in) throw parse_error("cannot open family file " + spec.str("path"));
  return read_family_text(in);
}

}  // namespace

element family_universe(const family_spec& spec) {
  switch (spec.kind) {
    case family_kind::powerset:
    case family_kind::bounded_range:
    case family_kind::bounded_card:
    case family_kind::knapsack:
      return static_cast<element>(spec.num("A"));
    case family_kind::matchings:
      return static_cast<element>(spec_graph(spec).edges.size());
    case family_kind::grid_paths: {
      const auto n = static_cast<element>(spec.num("n"));
      return std::max<element>(1, 2 * n * (n - 1));
    }
    case family_kind::nqueens: {
      const auto n = static_cast<element>(spec.num("n"));
      return n * n;
    }
    case family_kind::file:
      return spec_text_family(spec).universe;
  }
  return 1;
}

built_family build_family(const family_spec& spec) {
  built_family out;
  switch (spec.kind) {
    case family_kind::powerset: {
      const auto a = static_cast<uint32_t>(spec.num("A"));
      out.store = std::make_unique<zdd_store>(a);
      out.root = gen_powerset(*out.store, a);
      break;
    }
    case family_kind::bounded_range: {
      const auto a = static_cast<uint32_t>(spec.num("A"));
      out.store = std::make_unique<zdd_store>(a);
      out.root = gen_bounded_range(*out.store, a, static_cast<uint32_t>(spec.num("B")));
      break;
    }
    case family_kind::bounded_card: {
      const auto a = static_cast<uint32_t>(spec.num("A"));
      out.store = std::make_unique<zdd_store>(a);
      out.root = gen_bounded_card(*out.store, a, static_cast<uint32_t>(spec.num("B")));
      break;
    }
    case family_kind::knapsack: {
      const auto a = static_cast<uint32_t>(spec.num("A"));
      out.store = std::make_unique<zdd_store>(a);
      out.root = gen_knapsack(*out.store, a, spec.num("W"), spec.num("C"), spec.num("seed"));
      break;
    }
    case family_kind::matchings: {
      const graph g = spec_graph(spec);
      out.store = std::make_unique<zdd_store>(static_cast<element>(g.edges.size()));
      out.root = gen_matchings(*out.store, g);
      break;
    }
    case family_kind::grid_paths: {
      const auto n = static_cast<uint32_t>(spec.num("n"));
      out.store = std::make_unique<zdd_store>(std::max<uint32_t>(1, 2 * n * (n - 1)));
      out.root = gen_grid_paths(*out.store, n);
      break;
    }
    case family_kind::nqueens: {
      const auto n = static_cast<uint32_t>(spec.num("n"));
      out.store = std::make_unique<zdd_store>(n * n);
      out.root = gen_nqueens(*out.store, n);
      break;
    }
    case family_kind::file: {
      const text_family tf = spec_text_family(spec);
      out.store = std::make_unique<zdd_store>(tf.universe);
      out.root = out.store->from_sets(tf.sets);
      break;
    }
  }
  return out;
}

}  // namespace topzdd
