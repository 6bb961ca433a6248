#pragma once

#include <cstdint>
#include <vector>

#include "topzdd/bit_vector.hpp"
#include "topzdd/packed_array.hpp"

namespace topzdd {

/// Elias-Fano encoded bitvector: the positions of its ones, split into
/// low bits stored verbatim and high bits stored in unary.
///
/// select1 is constant time via the high-part select index. rank and
/// select0 take O(log m) (binary search / bucket scan).
class sparse_bit_vector {
 public:
  sparse_bit_vector() = default;
  explicit sparse_bit_vector(const std::vector<bool>& bits);
  // positions: strictly increasing, 1-based, each <= n
  sparse_bit_vector(const std::vector<uint64_t>& positions, size_t n);

  [[nodiscard]] size_t size() const { return n_; }
  [[nodiscard]] size_t ones() const { return low_.size(); }
  [[nodiscard]] size_t zeros() const { return n_ - ones(); }
  [[nodiscard]] unsigned low_width() const { return low_width_; }

  [[nodiscard]] bool access(size_t i) const;
  [[nodiscard]] size_t rank1(size_t i) const;
  [[nodiscard]] size_t rank0(size_t i) const { return i - rank1(i); }
  [[nodiscard]] size_t select1(size_t j) const;
  [[nodiscard]] size_t select0(size_t j) const;

  [[nodiscard]] uint64_t size_in_bits() const { return serialized_bits(*this); }
  void write(word_writer& w) const;
  static sparse_bit_vector read(word_reader& r);

 private:
  void build(const std::vector<uint64_t>& positions);
  [[nodiscard]] uint64_t value(size_t k) const;  // 0-based value of the (k+1)-th one

  size_t n_ = 0;
  unsigned low_width_ = 0;
  packed_int_array low_;
  bit_vector high_;
};

}  // namespace topzdd
