#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topzdd/top_zdd.hpp"

namespace topzdd {

/// On-disk layout, all little-endian 64-bit words:
///   'TZDD' | version << 32 | shape << 48, n, c, ℓ(root)
///   16 length-prefixed components in kComponentNames order
///   family spec (byte length, then bytes padded to a word)
///   FNV-1a 64 over every preceding byte
inline constexpr uint32_t kContainerMagic = 0x445A5A54;  // "TZDD"
inline constexpr uint16_t kContainerVersion = 1;
// magic word, n, c, ℓ(root), 16 length prefixes, checksum
inline constexpr uint64_t kFixedHeaderBytes = 8 * (4 + top_zdd::kComponents + 1);

struct loaded_container {
  top_zdd tz;
  std::string spec;
};

std::vector<uint64_t> serialize(const top_zdd& tz, std::string_view spec);
loaded_container deserialize(std::span<const uint64_t> words);

void write_container(const std::filesystem::path& path, const top_zdd& tz, std::string_view spec);
loaded_container read_container(const std::filesystem::path& path);

// Fixed header plus every component; the spec block is not counted.
uint64_t topzdd_bytes(const top_zdd& tz);
std::array<uint64_t, top_zdd::kComponents> component_bytes(const top_zdd& tz);

uint64_t fnv1a64(std::span<const uint64_t> words);

}  // namespace topzdd
