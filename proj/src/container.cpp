#include "topzdd/container.hpp"

#include <cstring>
#include <fstream>

namespace topzdd {

uint64_t fnv1a64(std::span<const uint64_t> words) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (uint64_t w : words) {
    for (int i = 0; i < 8; ++i) {
      h ^= (w >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

std::array<uint64_t, top_zdd::kComponents> component_bytes(const top_zdd& tz) {
  auto bits = tz.component_bits();
  for (auto& b : bits) b /= 8;
  return bits;
}

uint64_t topzdd_bytes(const top_zdd& tz) {
  uint64_t total = kFixedHeaderBytes;
  for (uint64_t b : component_bytes(tz)) total += b;
  return total;
}

std::vector<uint64_t> serialize(const top_zdd& tz, std::string_view spec) {
  word_writer w;
  w.put(kContainerMagic | uint64_t{kContainerVersion} << 32 | uint64_t{static_cast<uint8_t>(tz.form())} << 48);
  w.put(tz.node_count());
  w.put(tz.universe());
  w.put(tz.root_label());
  tz.write_components(w);
  std::vector<uint64_t> text((spec.size() + 7) / 8, 0);
  if (!spec.empty()) std::memcpy(text.data(), spec.data(), spec.size());
  w.put(spec.size());
  for (uint64_t x : text) w.put(x);
  std::vector<uint64_t> out = w.words();
  out.push_back(fnv1a64(out));
  return out;
}

loaded_container deserialize(std::span<const uint64_t> words) {
  if (words.size() < 5) throw format_error("container too short");
  if ((words[0] & 0xFFFFFFFF) != kContainerMagic) throw format_error("bad magic");
  const auto version = static_cast<uint16_t>(words[0] >> 32);
  if (version != kContainerVersion) throw format_error("unsupported container version " + std::to_string(version));
  const auto body = words.first(words.size() - 1);
  if (fnv1a64(body) != words.back()) throw format_error("checksum mismatch");
  const auto form = static_cast<uint8_t>(words[0] >> 48);
  if (form > 3) throw format_error("unknown shape flag");
  if (words[1] > UINT32_MAX || words[2] > UINT32_MAX || words[3] > UINT32_MAX) throw format_error("header field out of range");

  word_reader r(body.subspan(4));
  loaded_container out;
  try {
    out.tz = top_zdd::from_components(static_cast<top_zdd::shape>(form), static_cast<uint32_t>(words[1]),
                                      static_cast<element>(words[2]), static_cast<element>(words[3]), r);
  } catch (const format_error&) {
    throw;
  } catch (const std::exception& e) {
    throw format_error(std::string("malformed component: ") + e.what());
  }
  const uint64_t len = r.get();
  const auto text = r.get_array_of((len + 7) / 8);
  if (!r.at_end()) throw format_error("trailing words before checksum");
  out.spec.resize(len);
  if (len) std::memcpy(out.spec.data(), text.data(), len);
  return out;
}

void write_container(const std::filesystem::path& path, const top_zdd& tz, std::string_view spec) {
  const auto words = serialize(tz, spec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (uint64_t w : words) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((w >> (8 * i)) & 0xFF);
    os.write(bytes, 8);
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

loaded_container read_container(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) throw format_error("file size is not a multiple of 8 bytes");
  std::vector<uint64_t> words(bytes.size() / 8);
  for (size_t i = 0; i < words.size(); ++i) {
    uint64_t w = 0;
    for (int b = 0; b < 8; ++b) w |= uint64_t{bytes[8 * i + b]} << (8 * b);
    words[i] = w;
  }
  return deserialize(words);
}

}  // namespace topzdd
