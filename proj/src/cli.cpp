#include "topzdd/cli.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "topzdd/build.hpp"
#include "topzdd/container.hpp"
#include "topzdd/families.hpp"

namespace topzdd::cli {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

// TZDD_LOG = error | warn | info | debug (default warn)
int log_level() {
  static const int level = [] {
    const char* v = std::getenv("TZDD_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "error") return 0;
    if (s == "info") return 2;
    if (s == "debug" || s == "trace") return 3;
    return 1;
  }();
  return level;
}

template <typename... Args>
void log(std::ostream& err, int level, fmt::format_string<Args...> f, Args&&... args) {
  if (level > log_level()) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  fmt::print(err, "[tzdd {}] {}\n", names[level], fmt::format(f, std::forward<Args>(args)...));
}

struct loaded {
  std::string spec;
  top_zdd tz;
  built_family plain;
  double build_ms = 0;
};

built_family rebuild(const std::string& spec) { return build_family(parse_family_spec(spec)); }

// A readable file is a container; anything else is a family spec.
loaded load_any(const std::string& arg, std::ostream& err) {
  loaded l;
  if (std::filesystem::is_regular_file(arg)) {
    auto c = read_container(arg);
    l.spec = std::move(c.spec);
    l.tz = std::move(c.tz);
    log(err, 2, "read {} ({} nodes, spec {})", arg, l.tz.node_count(), l.spec);
    if (l.spec.empty()) throw format_error("container carries no family spec");
    l.plain = rebuild(l.spec);
    return l;
  }
  l.spec = arg;
  const auto t0 = clock::now();
  l.plain = rebuild(arg);
  log(err, 2, "built {} in {:.1f} ms", arg, ms_since(t0));
  const auto t1 = clock::now();
  l.tz = compress(*l.plain.store, l.plain.root);
  l.build_ms = ms_since(t1);
  return l;
}

std::vector<element> parse_set(const std::string& text) {
  std::vector<element> out;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    std::istringstream words(token);
    std::string w;
    while (words >> w) {
      size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size() || v == 0 || v > UINT32_MAX) throw parse_error("bad set element '" + w + "'");
      out.push_back(static_cast<element>(v));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

size_report make_size_report(const std::string& spec, const top_zdd& tz, double build_ms) {
  size_report r;
  r.spec = spec;
  r.n = tz.node_count();
  r.c = tz.universe();
  r.naive_bytes = naive_size_bytes(r.n, r.c);
  r.component_bytes = component_bytes(tz);
  r.topzdd_bytes = topzdd_bytes(tz);
  r.build_ms = build_ms;
  return r;
}

void print_size_table(std::ostream& os, const size_report& r) {
  fmt::print(os, "{:<16}{}\n", "family", r.spec);
  fmt::print(os, "{:<16}{:>12}\n", "nodes", r.n);
  fmt::print(os, "{:<16}{:>12}\n", "universe", r.c);
  fmt::print(os, "{:<16}{:>12}\n", "naive bytes", r.naive_bytes);
  fmt::print(os, "{:<16}{:>12}\n", "topzdd bytes", r.topzdd_bytes);
  fmt::print(os, "{:<16}{:>12.4f}\n", "ratio", r.ratio());
  fmt::print(os, "{:<16}{:>12.2f}\n", "build ms", r.build_ms);
  fmt::print(os, "  {:<14}{:>10}\n", "header", kFixedHeaderBytes);
  for (size_t i = 0; i < top_zdd::kComponents; ++i) {
    fmt::print(os, "  {:<14}{:>10}\n", top_zdd::kComponentNames[i], r.component_bytes[i]);
  }
}

std::string size_json(const size_report& r) {
  nlohmann::ordered_json j;
  j["record"] = "size";
  j["family"] = r.spec;
  j["n"] = r.n;
  j["c"] = r.c;
  j["naive_bytes"] = r.naive_bytes;
  j["topzdd_bytes"] = r.topzdd_bytes;
  j["ratio"] = r.ratio();
  j["build_ms"] = r.build_ms;
  nlohmann::ordered_json parts;
  parts["header"] = kFixedHeaderBytes;
  for (size_t i = 0; i < top_zdd::kComponents; ++i) parts[std::string(top_zdd::kComponentNames[i])] = r.component_bytes[i];
  j["components"] = parts;
  return j.dump();
}

traverse_report run_traversal(const top_zdd& tz, const zdd_store& store, handle root, uint64_t steps, uint64_t seed) {
  traverse_report r;
  r.seed = seed;
  if (zdd_store::is_terminal(root)) return r;  // no edge to choose
  r.steps = steps;

  std::unordered_map<handle, uint32_t> pre;
  {
    // names taken from the edge list so both walks hash the same values
    const auto edges = preorder_edge_list(store, root);
    std::vector<std::pair<handle, uint32_t>> todo{{root, 1}};
    while (!todo.empty()) {
      const auto [h, x] = todo.back();
      todo.pop_back();
      if (zdd_store::is_terminal(h) || pre.contains(h)) continue;
      pre.emplace(h, x);
      todo.emplace_back(store.hi(h), edges[x - 1].one);
      todo.emplace_back(store.lo(h), edges[x - 1].zero);
    }
  }

  const uint32_t n = tz.node_count();
  auto walk_compressed = [&](uint64_t* hash, uint64_t* restarts) {
    splitmix64 rng(seed);
    uint32_t x = 1;
    uint64_t h = 0;
    for (uint64_t i = 0; i < steps; ++i) {
      x = (rng.next() & 1) ? tz.one(x) : tz.zero(x);
      if (x > n) {
        if (restarts) ++*restarts;
        x = 1;
      }
      h = (h ^ x) * 0x100000001B3ULL;
    }
    if (hash) *hash = h;
    return x;
  };
  auto walk_plain = [&](uint64_t* hash) {
    splitmix64 rng(seed);
    handle v = root;
    uint64_t h = 0;
    for (uint64_t i = 0; i < steps; ++i) {
      v = (rng.next() & 1) ? store.hi(v) : store.lo(v);
      if (zdd_store::is_terminal(v)) v = root;
      if (hash) h = (h ^ pre.at(v)) * 0x100000001B3ULL;
    }
    if (hash) *hash = h;
    return v;
  };

  // warm-up passes double as the equivalence check
  uint64_t plain_hash = 0;
  walk_compressed(&r.path_hash, &r.restarts);
  walk_plain(&plain_hash);
  if (plain_hash != r.path_hash) throw invariant_error("traversal: compressed and plain walks diverged");

  volatile uint64_t sink = 0;
  auto t0 = clock::now();
  sink = sink + walk_compressed(nullptr, nullptr);
  r.compressed_us = ms_since(t0) * 1000.0 / static_cast<double>(steps);
  t0 = clock::now();
  sink = sink + walk_plain(nullptr);
  r.uncompressed_us = ms_since(t0) * 1000.0 / static_cast<double>(steps);
  return r;
}

std::string traverse_json(const traverse_report& r) {
  nlohmann::ordered_json j;
  j["record"] = "traverse";
  j["steps"] = r.steps;
  j["seed"] = r.seed;
  j["restarts"] = r.restarts;
  j["path_hash"] = r.path_hash;
  j["topzdd_us_per_step"] = r.compressed_us;
  j["zdd_us_per_step"] = r.uncompressed_us;
  return j.dump();
}

verify_result verify_against(const top_zdd& tz, const zdd_store& store, handle root) {
  verify_result v;
  const auto ref = preorder_edge_list(store, root);
  v.n = static_cast<uint32_t>(ref.size());
  if (tz.node_count() != ref.size()) {
    v.ok = false;
    v.detail = fmt::format("node count {} vs {}", tz.node_count(), ref.size());
    return v;
  }
  if (zdd_store::is_terminal(root)) {
    const bool top = root == kTop;
    v.ok = tz.form() == (top ? top_zdd::shape::top : top_zdd::shape::bottom);
    if (!v.ok) v.detail = "terminal family stored with the wrong shape";
    return v;
  }
  for (uint32_t x = 1; x <= v.n; ++x) {
    const node_triple got{tz.label(x), tz.zero(x), tz.one(x)};
    if (got != ref[x - 1]) {
      v.ok = false;
      v.first_mismatch = x;
      v.detail = fmt::format("preorder {}: got ({}, {}, {}) expected ({}, {}, {})", x, got.label, got.zero, got.one,
                             ref[x - 1].label, ref[x - 1].zero, ref[x - 1].one);
      return v;
    }
  }
  const auto all = tz.decompress_all();
  for (uint32_t x = 1; x <= v.n; ++x) {
    if (all[x - 1] != ref[x - 1]) {
      v.ok = false;
      v.first_mismatch = x;
      v.detail = fmt::format("decompress_all differs at preorder {}", x);
      return v;
    }
  }
  return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Top ZDD compression of set families"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "print JSON lines only");

  std::string spec;
  std::string path;
  std::string set_text;
  uint64_t steps = 65536;
  uint64_t seed = 1;
  uint64_t limit = 1000000;

  auto* build = app.add_subcommand("build", "build a family, compress it, write a container");
  build->add_option("spec,--spec", spec, "family spec, e.g. knapsack:A=100,W=100,C=500,seed=7")->required();
  build->add_option("out,--out", path, "container path");

  auto* stats = app.add_subcommand("stats", "size report of a container");
  stats->add_option("file", path)->required();

  auto* verify = app.add_subcommand("verify", "compare every query with the plain ZDD");
  verify->add_option("input,--spec", spec, "container file or family spec")->required();

  auto* bench = app.add_subcommand("bench", "random 0/1 edge walk on both representations");
  bench->add_option("input,--spec", spec, "container file or family spec")->required();
  bench->add_option("--steps", steps, "edge choices")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed);

  auto* member = app.add_subcommand("member", "membership of one set");
  member->add_option("file", path)->required();
  member->add_option("set", set_text, "elements, comma or space separated")->required();

  auto* exp = app.add_subcommand("export", "write a family as text");
  exp->add_option("spec,--spec", spec)->required();
  exp->add_option("--out", path);
  exp->add_option("--limit", limit, "maximum number of sets");

  for (auto* sub : {build, stats, verify, bench, member, exp}) sub->add_flag("--json", json, "print JSON lines only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (build->parsed()) {
      const auto l = load_any(spec, err);
      if (!path.empty()) write_container(path, l.tz, l.spec);
      const auto r = make_size_report(l.spec, l.tz, l.build_ms);
      if (!json) print_size_table(out, r);
      out << size_json(r) << "\n";
      return kOk;
    }
    if (stats->parsed()) {
      const auto c = read_container(path);
      const auto r = make_size_report(c.spec, c.tz, 0);
      if (!json) print_size_table(out, r);
      out << size_json(r) << "\n";
      return kOk;
    }
    if (verify->parsed()) {
      loaded l = load_any(spec, err);
      if (!std::filesystem::is_regular_file(spec)) {
        // exercise the container path too
        auto words = serialize(l.tz, l.spec);
        l.tz = deserialize(words).tz;
      }
      const auto t0 = clock::now();
      const auto v = verify_against(l.tz, *l.plain.store, l.plain.root);
      if (json) {
        nlohmann::ordered_json j;
        j["record"] = "verify";
        j["family"] = l.spec;
        j["n"] = v.n;
        j["pass"] = v.ok;
        j["first_mismatch"] = v.first_mismatch ? nlohmann::json(*v.first_mismatch) : nlohmann::json(nullptr);
        j["ms"] = ms_since(t0);
        out << j.dump() << "\n";
      } else if (v.ok) {
        fmt::print(out, "PASS {} ({} nodes)\n", l.spec, v.n);
      } else {
        fmt::print(out, "FAIL {}: {}\n", l.spec, v.detail);
      }
      return v.ok ? kOk : kVerifyFailure;
    }
    if (bench->parsed()) {
      const auto l = load_any(spec, err);
      const auto r = run_traversal(l.tz, *l.plain.store, l.plain.root, steps, seed);
      if (!json) {
        fmt::print(out, "{:<22}{}\n", "family", l.spec);
        fmt::print(out, "{:<22}{:>12}\n", "steps", r.steps);
        fmt::print(out, "{:<22}{:>12}\n", "seed", r.seed);
        fmt::print(out, "{:<22}{:>12}\n", "restarts", r.restarts);
        fmt::print(out, "{:<22}{:>12.4f}\n", "topzdd us/step", r.compressed_us);
        fmt::print(out, "{:<22}{:>12.4f}\n", "zdd us/step", r.uncompressed_us);
      }
      out << traverse_json(r) << "\n";
      return kOk;
    }
    if (member->parsed()) {
      const auto c = read_container(path);
      const bool in = c.tz.member(parse_set(set_text));
      if (json) {
        out << nlohmann::json{{"record", "member"}, {"member", in}}.dump() << "\n";
      } else {
        out << (in ? "true" : "false") << "\n";
      }
      return kOk;
    }
    if (exp->parsed()) {
      const auto b = rebuild(spec);
      if (path.empty()) {
        write_family_text(out, *b.store, b.root, limit);
      } else {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open " + path);
        write_family_text(os, *b.store, b.root, limit);
      }
      return kOk;
    }
  } catch (const parse_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const format_error& e) {
    err << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace topzdd::cli
