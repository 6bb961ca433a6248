// Acceptance run: one PASS/FAIL line per criterion, details indented below it.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "family_oracles.hpp"
#include "structure_oracles.hpp"
#include "succinct_oracles.hpp"
#include "topzdd/bit_sequence.hpp"
#include "topzdd/build.hpp"
#include "topzdd/cli.hpp"
#include "topzdd/container.hpp"
#include "topzdd/families.hpp"

using namespace topzdd;
namespace ot = topzdd::testing;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

const std::vector<std::string> kSuite = {
    "powerset:A=8",
    "powerset:A=64",
    "powerset:A=1000",
    "bounded_range:A=500,B=250",
    "bounded_card:A=100,B=50",
    "knapsack:A=100,W=100,C=500,seed=1",
    "knapsack:A=100,W=100,C=500,seed=2",
    "knapsack:A=100,W=100,C=500,seed=3",
    "matchings:complete=6",
    "matchings:grid=4",
    "grid_paths:n=3",
    "grid_paths:n=4",
    "grid_paths:n=5",
    "nqueens:n=4",
    "nqueens:n=5",
    "nqueens:n=6",
    "nqueens:n=7",
    "nqueens:n=8",
};

struct suite_build {
  std::string spec;
  built_family plain;
  top_zdd tz;
  build_stats stats;
};

std::vector<suite_build>& suite() {
  static std::vector<suite_build> builds = [] {
    std::vector<suite_build> out;
    for (const auto& s : kSuite) {
      suite_build b;
      b.spec = s;
      b.plain = build_family(parse_family_spec(s));
      b.tz = compress(*b.plain.store, b.plain.root, &b.stats);
      out.push_back(std::move(b));
    }
    return out;
  }();
  return builds;
}

int run_cli(std::vector<std::string> args, std::string* out_text) {
  args.insert(args.begin(), "topzdd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

struct criterion {
  int id;
  std::string title;
  std::function<bool(std::vector<std::string>&)> check;
};

bool lossless(std::vector<std::string>& notes) {
  const auto t0 = clock_type::now();
  bool ok = true;
  for (const auto& s : kSuite) {
    std::string text;
    const int rc = run_cli({"verify", s}, &text);
    if (rc != 0) {
      ok = false;
      notes.push_back(fmt::format("{}: exit {} {}", s, rc, text));
    }
  }
  const double secs = seconds_since(t0);
  notes.push_back(fmt::format("{} families verified in {:.2f} s", kSuite.size(), secs));
  return ok && secs < 60.0;
}

bool powerset_scaling(std::vector<std::string>& notes) {
  bool ok = true;
  std::vector<size_t> vertices;
  for (uint32_t m = 5; m <= 12; ++m) {
    const uint32_t a = 1U << m;
    zdd_store st(a);
    const top_zdd z = compress(st, gen_powerset(st, a));
    vertices.push_back(z.vertex_count());
    notes.push_back(fmt::format("A={:<5} T' vertices {}", a, z.vertex_count()));
  }
  for (size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i] > vertices[i - 1] + 12) ok = false;
  }
  return ok && vertices.back() < 200;
}

bool size_direction(std::vector<std::string>& notes) {
  bool ok = true;
  const std::vector<std::pair<std::string, bool>> cases = {{"powerset:A=1000", true},
                                                           {"bounded_range:A=500,B=250", true},
                                                           {"bounded_card:A=100,B=50", false},
                                                           {"knapsack:A=100,W=100,C=500,seed=1", false}};
  for (const auto& [s, twice] : cases) {
    const auto b = build_family(parse_family_spec(s));
    const top_zdd z = compress(*b.store, b.root);
    // serialized bytes come from the container itself
    const auto words = serialize(z, s);
    const uint64_t spec_block = 8 * (1 + (s.size() + 7) / 8);
    const uint64_t bytes = 8 * words.size() - spec_block;
    const uint64_t naive = naive_size_bytes(z.node_count(), b.store->universe());
    const bool pass = bytes == topzdd_bytes(z) && bytes < naive && (!twice || 2 * bytes <= naive);
    ok = ok && pass;
    notes.push_back(fmt::format("{}: topzdd {} B, naive {} B, ratio {:.3f}{}", s, bytes, naive,
                                static_cast<double>(bytes) / static_cast<double>(naive), pass ? "" : "  <-- fails"));
  }
  return ok;
}

bool oracle_counts(std::vector<std::string>& notes) {
  const auto t0 = clock_type::now();
  bool ok = true;
  auto compare = [&](const std::string& s, size_t expect) {
    const auto b = build_family(parse_family_spec(s));
    const big_count got = b.store->count_sets(b.root);
    const bool pass = got == expect;
    ok = ok && pass;
    notes.push_back(fmt::format("{}: {} sets, oracle {}{}", s, got.str(), expect, pass ? "" : "  <-- fails"));
  };
  for (uint32_t n = 4; n <= 8; ++n) compare(fmt::format("nqueens:n={}", n), ot::oracle_nqueens(n).size());
  for (uint32_t n = 3; n <= 4; ++n) compare(fmt::format("grid_paths:n={}", n), ot::oracle_grid_paths(n).size());
  compare("matchings:complete=3", ot::oracle_matchings(complete_graph(3)).size());
  compare("matchings:complete=6", ot::oracle_matchings(complete_graph(6)).size());
  compare("matchings:grid=3", ot::oracle_matchings(grid_graph(3)).size());
  compare("knapsack:A=14,W=100,C=300,seed=7", ot::oracle_subset_sum(knapsack_weights(14, 100, 7), 300).size());
  const double secs = seconds_since(t0);
  notes.push_back(fmt::format("{:.2f} s", secs));
  return ok && secs < 30.0;
}

bool succinct(std::vector<std::string>& notes) {
  const auto t0 = clock_type::now();
  std::mt19937_64 rng(2024);
  size_t bad = 0;
  size_t queries = 0;
  const std::vector<double> densities = {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99};
  for (double d : densities) {
    const ot::naive_bits nb(ot::random_bits(rng, 20000, d));
    const bit_sequence bv = bv_auto(nb.b);
    std::uniform_int_distribution<size_t> pos(1, nb.b.size());
    for (size_t q = 0; q < 100000 / densities.size(); ++q, ++queries) {
      const size_t i = pos(rng);
      bad += bv.access(i) != nb.b[i - 1];
      bad += bv.rank1(i) != nb.rank(i, true);
      bad += bv.rank0(i) != nb.rank(i, false);
      if (!nb.pos1.empty()) {
        const size_t j = 1 + rng() % nb.pos1.size();
        bad += bv.select1(j) != nb.pos1[j - 1];
      }
      if (!nb.pos0.empty()) {
        const size_t j = 1 + rng() % nb.pos0.size();
        bad += bv.select0(j) != nb.pos0[j - 1];
      }
    }
  }
  size_t tree_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const size_t n = 1 + rng() % 10000;
    const auto tree = ot::explicit_tree::random(rng, n);
    tree_bad += ot::bp_mismatches(tree, bp_tree(tree.parens), rng, 200);
  }
  const double secs = seconds_since(t0);
  notes.push_back(fmt::format("{} bitvector queries, {} mismatches; 100 trees, {} BP mismatches; {:.2f} s", queries, bad,
                              tree_bad, secs));
  return bad == 0 && tree_bad == 0 && secs < 30.0;
}

bool cluster_sizes(std::vector<std::string>& notes) {
  bool ok = true;
  size_t checked = 0;
  for (const auto& b : suite()) {
    if (b.tz.form() != top_zdd::shape::normal) continue;
    size_t bad = 0;
    for (size_t pos : ot::tprime_positions(b.tz)) {
      const size_t expanded = b.tz.expand_cluster(pos).rel_label.size();
      const size_t got = b.tz.cluster_size(b.tz.resolve(pos));
      bad += got != expanded;
      ++checked;
    }
    if (bad) {
      ok = false;
      notes.push_back(fmt::format("{}: {} vertices disagree", b.spec, bad));
    }
  }
  notes.push_back(fmt::format("{} T' vertices checked", checked));
  return ok;
}

bool greedy_height(std::vector<std::string>& notes) {
  bool ok = true;
  for (const auto& b : suite()) {
    const uint64_t edges = b.stats.spanning_edges;
    const double bound = edges < 2 ? 0.0 : 6.0 * std::log2(static_cast<double>(edges));
    const bool pass = b.stats.top_tree_height <= bound;
    ok = ok && pass;
    notes.push_back(fmt::format("{}: height {} over {} spanning edges (bound {:.1f}){}", b.spec, b.stats.top_tree_height,
                                edges, bound, pass ? "" : "  <-- fails"));
  }
  return ok;
}

bool query_depth(std::vector<std::string>& notes) {
  bool ok = true;
  std::mt19937_64 rng(77);
  for (const auto& b : suite()) {
    if (b.tz.form() != top_zdd::shape::normal) continue;
    query_trace trace;
    const auto t0 = clock_type::now();
    std::uniform_int_distribution<uint32_t> pick(1, b.tz.node_count());
    for (int q = 0; q < 10000; ++q) {
      const uint32_t x = pick(rng);
      (void)b.tz.label(x, &trace);
      (void)b.tz.zero(x, &trace);
      (void)b.tz.one(x, &trace);
    }
    const double us = seconds_since(t0) * 1e6 / 30000.0;
    const bool pass = trace.max_descent <= 4 * static_cast<size_t>(b.stats.top_tree_height);
    ok = ok && pass;
    notes.push_back(fmt::format("{}: max descent {} (height {}), {:.2f} us/query{}", b.spec, trace.max_descent,
                                b.stats.top_tree_height, us, pass ? "" : "  <-- fails"));
  }
  return ok;
}

bool traversal(std::vector<std::string>& notes) {
  bool ok = true;
  for (const std::string s : {"powerset:A=1000", "knapsack:A=100,W=100,C=500,seed=1", "nqueens:n=8"}) {
    std::string first;
    std::string second;
    const int rc1 = run_cli({"bench", s, "--seed", "9", "--json"}, &first);
    const int rc2 = run_cli({"bench", s, "--seed", "9", "--json"}, &second);
    if (rc1 != 0 || rc2 != 0) {
      ok = false;
      notes.push_back(fmt::format("{}: bench exit {} / {}", s, rc1, rc2));
      continue;
    }
    const auto a = nlohmann::json::parse(first);
    const auto b = nlohmann::json::parse(second);
    const bool pass = a["steps"] == 65536 && b["steps"] == 65536 && a["path_hash"] == b["path_hash"] &&
                      a.contains("topzdd_us_per_step") && a.contains("zdd_us_per_step");
    ok = ok && pass;
    notes.push_back(fmt::format("{}: {} steps, {} restarts, topzdd {:.4f} us/step, zdd {:.4f} us/step{}", s,
                                a["steps"].get<uint64_t>(), a["restarts"].get<uint64_t>(),
                                a["topzdd_us_per_step"].get<double>(), a["zdd_us_per_step"].get<double>(),
                                pass ? "" : "  <-- fails"));
  }
  return ok;
}

}  // namespace

int main() {
  const std::vector<criterion> criteria = {
      {1, "lossless compression of the desk-scale suite", lossless},
      {2, "power set T' vertices grow additively per doubling", powerset_scaling},
      {3, "serialized size below the naive size", size_direction},
      {4, "family counts match brute-force oracles", oracle_counts},
      {5, "succinct structures match naive references", succinct},
      {6, "cluster_size matches decompressed clusters", cluster_sizes},
      {7, "greedy top tree height within 6 log2(edges)", greedy_height},
      {8, "query descent within 4x top tree height", query_depth},
      {9, "traversal benchmark protocol", traversal},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::vector<std::string> notes;
    bool ok = false;
    try {
      ok = c.check(notes);
    } catch (const std::exception& e) {
      notes.push_back(std::string("exception: ") + e.what());
    }
    fmt::print("{} criterion {}: {}\n", ok ? "PASS" : "FAIL", c.id, c.title);
    for (const auto& n : notes) fmt::print("    {}\n", n);
    failed += ok ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
