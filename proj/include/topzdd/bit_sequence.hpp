#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "topzdd/bit_vector.hpp"
#include "topzdd/sparse_bit_vector.hpp"

namespace topzdd {

enum class bit_encoding : uint8_t { plain = 0, sparse = 1, flipped_sparse = 2 };

std::string_view to_string(bit_encoding e);

/// A bitvector whose physical representation is picked from its density:
/// ones below 1/4 of the length use Elias-Fano over the ones, zeros below
/// 1/4 use Elias-Fano over the zeros, anything else the plain layout.
class bit_sequence {
 public:
  bit_sequence() = default;
  bit_sequence(const std::vector<bool>& bits, bit_encoding enc);

  [[nodiscard]] bit_encoding encoding() const { return enc_; }
  [[nodiscard]] size_t size() const { return n_; }
  [[nodiscard]] size_t ones() const { return rank1(n_); }

  [[nodiscard]] bool access(size_t i) const;
  [[nodiscard]] size_t rank1(size_t i) const;
  [[nodiscard]] size_t rank0(size_t i) const { return i - rank1(i); }
  [[nodiscard]] size_t rank(size_t i, bool c) const { return c ? rank1(i) : rank0(i); }
  [[nodiscard]] size_t select1(size_t j) const;
  [[nodiscard]] size_t select0(size_t j) const;
  [[nodiscard]] size_t select(size_t j, bool c) const { return c ? select1(j) : select0(j); }

  [[nodiscard]] uint64_t size_in_bits() const { return serialized_bits(*this); }
  void write(word_writer& w) const;
  static bit_sequence read(word_reader& r);

 private:
  bit_encoding enc_ = bit_encoding::plain;
  size_t n_ = 0;
  bit_vector plain_;
  sparse_bit_vector sparse_;  // over ones, or over zeros when flipped
};

/// Density-driven constructor; the chosen encoding is kept on the result.
bit_sequence bv_auto(const std::vector<bool>& bits);

/// Unary code: for each count, `count` ones followed by a zero.
std::vector<bool> unary_code(const std::vector<uint64_t>& counts);

}  // namespace topzdd
