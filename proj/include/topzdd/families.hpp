#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "topzdd/zdd.hpp"

namespace topzdd {

/// Simple undirected graph; edge order is the ZDD variable order (edge i -> element i+1).
struct graph {
  uint32_t vertices = 0;  // vertex ids are 1..vertices
  std::vector<std::pair<uint32_t, uint32_t>> edges;
};

graph complete_graph(uint32_t k);
graph path_graph(uint32_t k);
// k x k vertices, vertex (r, c) -> r*k + c + 1; for each vertex in row-major
// order its right edge then its down edge.
graph grid_graph(uint32_t k);
// One edge per line `u v` (1-based ids); blank lines and `#` comments skipped.
graph read_edge_list(std::istream& is);

/// 64-bit SplitMix generator used for knapsack weights.
class splitmix64 {
 public:
  explicit splitmix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// Weights w_i = 1 + next() % W, sorted descending (stable on original index);
// element i of the family carries weight result[i-1].
std::vector<uint64_t> knapsack_weights(uint32_t a, uint64_t w, uint64_t seed);

handle gen_powerset(zdd_store& store, uint32_t a);
handle gen_bounded_range(zdd_store& store, uint32_t a, uint32_t b);
handle gen_bounded_card(zdd_store& store, uint32_t a, uint32_t b);
handle gen_knapsack(zdd_store& store, uint32_t a, uint64_t w, uint64_t capacity, uint64_t seed);
handle gen_knapsack_weights(zdd_store& store, const std::vector<uint64_t>& weights, uint64_t capacity);
handle gen_matchings(zdd_store& store, const graph& g);
// Edge sets of simple paths between opposite corners of the n x n vertex grid.
set_list grid_path_sets(uint32_t n);
handle gen_grid_paths(zdd_store& store, uint32_t n);
// Universe = n*n cells row-major; members are complete non-attacking placements.
handle gen_nqueens(zdd_store& store, uint32_t n);

enum class family_kind { powerset, bounded_range, bounded_card, knapsack, matchings, grid_paths, nqueens, file };

/// Parsed form of `kind:key=value,...`, e.g. `knapsack:A=100,W=100,C=500,seed=7`.
struct family_spec {
  family_kind kind = family_kind::powerset;
  std::map<std::string, std::string> params;
  std::string text;

  [[nodiscard]] uint64_t num(const std::string& key) const;
  [[nodiscard]] const std::string& str(const std::string& key) const;
};

family_spec parse_family_spec(const std::string& text);

struct built_family {
  std::unique_ptr<zdd_store> store;
  handle root = kBottom;
};

// Universe size implied by a spec (before building).
element family_universe(const family_spec& spec);
built_family build_family(const family_spec& spec);

}  // namespace topzdd
