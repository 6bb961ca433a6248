#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "topzdd/top_zdd.hpp"
#include "topzdd/zdd.hpp"

namespace topzdd::cli {

enum exit_code : int { kOk = 0, kFailure = 1, kUsage = 2, kVerifyFailure = 3, kFormat = 4 };

struct size_report {
  std::string spec;
  uint64_t n = 0;
  uint64_t c = 0;
  uint64_t naive_bytes = 0;
  uint64_t topzdd_bytes = 0;
  std::array<uint64_t, top_zdd::kComponents> component_bytes{};
  double build_ms = 0;
  [[nodiscard]] double ratio() const {
    return naive_bytes == 0 ? 0.0 : static_cast<double>(topzdd_bytes) / static_cast<double>(naive_bytes);
  }
};

size_report make_size_report(const std::string& spec, const top_zdd& tz, double build_ms);
void print_size_table(std::ostream& os, const size_report& r);
std::string size_json(const size_report& r);

struct traverse_report {
  uint64_t steps = 0;
  uint64_t seed = 0;
  uint64_t restarts = 0;
  uint64_t path_hash = 0;  // labels visited, identical for both representations
  double compressed_us = 0;
  double uncompressed_us = 0;
};

// Uniform 0/1 edge choices from the root, restarting there on a terminal.
traverse_report run_traversal(const top_zdd& tz, const zdd_store& store, handle root, uint64_t steps, uint64_t seed);
std::string traverse_json(const traverse_report& r);

struct verify_result {
  bool ok = true;
  uint32_t n = 0;
  std::optional<uint32_t> first_mismatch;
  std::string detail;
};

// Queries every preorder of `tz` through label/zero/one and compares with the
// plain ZDD; decompress_all is compared as well.
verify_result verify_against(const top_zdd& tz, const zdd_store& store, handle root);

// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topzdd::cli
