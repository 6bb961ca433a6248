#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "structure_oracles.hpp"
#include "topzdd/build.hpp"
#include "topzdd/cli.hpp"
#include "topzdd/container.hpp"
#include "topzdd/families.hpp"

using namespace topzdd;
namespace fs = std::filesystem;

namespace {

struct cli_result {
  int rc;
  std::string out;
  std::string err;
};

cli_result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "topzdd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

nlohmann::json last_json_line(const std::string& text) {
  const auto start = text.rfind('{');
  REQUIRE(start != std::string::npos);
  return nlohmann::json::parse(text.substr(text.rfind('\n', start) == std::string::npos ? 0 : text.rfind('\n', start) + 1));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "topzdd_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("container round trip keeps queries and sizes") {
  for (const char* s : {"powerset:A=64", "knapsack:A=40,W=60,C=300,seed=3", "nqueens:n=6", "nqueens:n=2",
                        "matchings:path=2"}) {
    const auto b = build_family(parse_family_spec(s));
    const top_zdd z = compress(*b.store, b.root);
    const auto words = serialize(z, s);
    const auto back = deserialize(words);
    CHECK(back.spec == s);
    CHECK(back.tz.form() == z.form());
    CHECK(back.tz.component_bits() == z.component_bits());
    CHECK(back.tz.decompress_all() == z.decompress_all());
    CHECK(back.tz.decompress_all() == topzdd::testing::reference_triples(*b.store, b.root));
    CHECK(serialize(back.tz, s) == words);
    const uint64_t spec_block = 8 * (1 + (std::string_view(s).size() + 7) / 8);
    CHECK(8 * words.size() - spec_block == topzdd_bytes(z));
  }
}

TEST_CASE("corrupt containers are rejected") {
  zdd_store st(8);
  const top_zdd z = compress(st, st.power_set(1, 8));
  const auto words = serialize(z, "powerset:A=8");

  auto flipped = words;
  flipped[7] ^= 1;
  CHECK_THROWS_AS(deserialize(flipped), format_error);

  auto magic = words;
  magic[0] ^= 0xFF;
  CHECK_THROWS_AS(deserialize(magic), format_error);

  auto truncated = words;
  truncated.resize(words.size() / 2);
  CHECK_THROWS_AS(deserialize(truncated), format_error);

  // a consistent checksum over inconsistent components
  auto forged = words;
  forged[1] += 1;
  forged.back() = fnv1a64(std::span(forged).first(forged.size() - 1));
  CHECK_THROWS_AS(deserialize(forged), format_error);

  CHECK_THROWS_AS(deserialize(std::vector<uint64_t>{1, 2}), format_error);
}

TEST_CASE("build writes deterministic files that stats reads back") {
  const auto a = scratch("k7a.tz");
  const auto b = scratch("k7b.tz");
  const std::string spec = "knapsack:A=100,W=100,C=500,seed=7";
  const auto first = run_cli({"build", spec, a.string(), "--json"});
  REQUIRE(first.rc == 0);
  REQUIRE(run_cli({"build", spec, "--out", b.string()}).rc == 0);
  CHECK(slurp(a) == slurp(b));

  const auto built = last_json_line(first.out);
  const auto stats = run_cli({"stats", a.string(), "--json"});
  REQUIRE(stats.rc == 0);
  const auto read = last_json_line(stats.out);
  CHECK(read["topzdd_bytes"] == built["topzdd_bytes"]);
  CHECK(read["components"] == built["components"]);
  CHECK(read["family"] == spec);
  const uint64_t spec_block = 8 * (1 + (spec.size() + 7) / 8);
  CHECK(fs::file_size(a) - spec_block == read["topzdd_bytes"].get<uint64_t>());

  uint64_t sum = 0;
  for (const auto& [name, bytes] : read["components"].items()) sum += bytes.get<uint64_t>();
  CHECK(sum == read["topzdd_bytes"].get<uint64_t>());
}

TEST_CASE("degenerate family container") {
  const auto p = scratch("q2.tz");
  const auto r = run_cli({"build", "nqueens:n=2", p.string(), "--json"});
  REQUIRE(r.rc == 0);
  CHECK(last_json_line(r.out)["n"] == 0);
  const auto c = read_container(p);
  CHECK(c.tz.form() == top_zdd::shape::bottom);
  CHECK(run_cli({"verify", p.string()}).rc == 0);
  CHECK(run_cli({"member", p.string(), ""}).out == "false\n");
}

TEST_CASE("member and verify commands") {
  const auto p = scratch("p10.tz");
  REQUIRE(run_cli({"build", "powerset:A=10", p.string()}).rc == 0);
  CHECK(run_cli({"member", p.string(), "1,4,10"}).out == "true\n");
  CHECK(run_cli({"member", p.string(), "2 3"}).out == "true\n");
  CHECK(run_cli({"member", p.string(), "11"}).out == "false\n");
  CHECK(run_cli({"member", p.string(), "x"}).rc == cli::kUsage);
  CHECK(run_cli({"verify", p.string()}).out.starts_with("PASS"));
  CHECK(run_cli({"verify", "grid_paths:n=4"}).rc == 0);

  // container whose spec names another family
  zdd_store st(10);
  write_container(scratch("lie.tz"), compress(st, st.power_set(1, 10)), "powerset:A=9");
  const auto lie = run_cli({"verify", scratch("lie.tz").string()});
  CHECK(lie.rc == cli::kVerifyFailure);
  CHECK(lie.out.starts_with("FAIL"));
}

TEST_CASE("verify reports the first differing preorder") {
  zdd_store a(4);
  const handle ra = a.power_set(1, 3);
  zdd_store b(4);
  const handle rb = b.power_set(2, 4);
  const auto v = cli::verify_against(compress(b, rb), a, ra);
  CHECK_FALSE(v.ok);
  REQUIRE(v.first_mismatch.has_value());
  CHECK(*v.first_mismatch == 1);
  CHECK(cli::verify_against(compress(a, ra), a, ra).ok);
}

TEST_CASE("bench is seeded and counts every step") {
  const auto one = run_cli({"bench", "nqueens:n=6", "--steps", "5000", "--seed", "4", "--json"});
  const auto two = run_cli({"bench", "nqueens:n=6", "--steps", "5000", "--seed", "4", "--json"});
  const auto other = run_cli({"bench", "nqueens:n=6", "--steps", "5000", "--seed", "5", "--json"});
  REQUIRE(one.rc == 0);
  const auto j1 = last_json_line(one.out);
  const auto j2 = last_json_line(two.out);
  CHECK(j1["steps"] == 5000);
  CHECK(j1["path_hash"] == j2["path_hash"]);
  CHECK(j1["restarts"] == j2["restarts"]);
  CHECK(j1["path_hash"] != last_json_line(other.out)["path_hash"]);
}

TEST_CASE("export writes the text family") {
  const auto r = run_cli({"export", "bounded_card:A=3,B=1"});
  REQUIRE(r.rc == 0);
  std::istringstream is(r.out);
  const auto fam = read_family_text(is);
  CHECK(fam.universe == 3);
  CHECK(fam.sets.size() == 4);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).rc == cli::kUsage);
  CHECK(run_cli({"frobnicate"}).rc == cli::kUsage);
  CHECK(run_cli({"build", "powerset:B=3"}).rc == cli::kUsage);
  CHECK(run_cli({"bench", "powerset:A=3", "--steps", "0"}).rc == cli::kUsage);
  std::ofstream(scratch("junk.tz"), std::ios::binary) << "not a container at all!";
  CHECK(run_cli({"stats", scratch("junk.tz").string()}).rc == cli::kFormat);
  CHECK(run_cli({"stats", scratch("missing.tz").string()}).rc == cli::kFailure);
}
