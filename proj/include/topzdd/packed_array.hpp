#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "topzdd/word_io.hpp"

namespace topzdd {

/// Fixed-width array of non-negative integers.
///
/// Entries use floor(log2(max)) + 1 bits (one bit when every value is zero).
/// Indexing is 0-based like any C++ container.
class packed_int_array {
 public:
  packed_int_array() = default;
  explicit packed_int_array(std::span<const uint64_t> values);
  // Fixed width, for callers (Elias-Fano low bits) that choose it themselves.
  packed_int_array(std::span<const uint64_t> values, unsigned width);

  [[nodiscard]] size_t size() const { return n_; }
  [[nodiscard]] bool empty() const { return n_ == 0; }
  [[nodiscard]] unsigned width() const { return width_; }
  [[nodiscard]] uint64_t operator[](size_t i) const;
  [[nodiscard]] uint64_t at(size_t i) const;
  [[nodiscard]] std::vector<uint64_t> to_vector() const;

  [[nodiscard]] uint64_t size_in_bits() const { return serialized_bits(*this); }
  void write(word_writer& w) const;
  static packed_int_array read(word_reader& r);

  static unsigned width_for(uint64_t max_value);

 private:
  void pack(std::span<const uint64_t> values);

  size_t n_ = 0;
  unsigned width_ = 1;
  std::vector<uint64_t> words_;
};

}  // namespace topzdd
