#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "topzdd/word_io.hpp"

namespace topzdd {

namespace bits {

// Position (0-based) of the r-th (0-based) set bit of w. w must have > r ones.
inline unsigned select_in_word(uint64_t w, unsigned r) {
  unsigned base = 0;
  for (;;) {
    const auto c = static_cast<unsigned>(std::popcount(w & 0xFFU));
    if (r < c) break;
    r -= c;
    w >>= 8;
    base += 8;
  }
  for (unsigned i = 0; i < r; ++i) w &= w - 1;
  return base + static_cast<unsigned>(std::countr_zero(w));
}

inline uint64_t low_mask(unsigned k) { return k >= 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1; }

}  // namespace bits

/// Plain bitvector with a superblock rank directory and sampled select.
///
/// Positions are 1-based: access(i) for 1 <= i <= size(), rank_c(i) counts
/// c-bits among the first i bits (rank_c(0) = 0), select_c(j) returns the
/// position of the j-th c-bit.
class bit_vector {
 public:
  static constexpr size_t kSuperWords = 16;  // 1024 bits per superblock
  static constexpr size_t kSuperBits = kSuperWords * 64;
  static constexpr size_t kSelectSample = 4096;

  bit_vector() { build_index(); }
  explicit bit_vector(const std::vector<bool>& bits);
  bit_vector(std::vector<uint64_t> words, size_t n);

  [[nodiscard]] size_t size() const { return n_; }
  [[nodiscard]] size_t ones() const { return ones_; }
  [[nodiscard]] size_t zeros() const { return n_ - ones_; }

  [[nodiscard]] bool access(size_t i) const;
  [[nodiscard]] size_t rank1(size_t i) const;
  [[nodiscard]] size_t rank0(size_t i) const { return i - rank1(i); }
  [[nodiscard]] size_t rank(size_t i, bool c) const { return c ? rank1(i) : rank0(i); }
  [[nodiscard]] size_t select1(size_t j) const;
  [[nodiscard]] size_t select0(size_t j) const;
  [[nodiscard]] size_t select(size_t j, bool c) const { return c ? select1(j) : select0(j); }

  // Unchecked 0-based bit read for hot loops in callers that own the bounds.
  [[nodiscard]] bool get0(size_t pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1U; }
  [[nodiscard]] const std::vector<uint64_t>& words() const { return words_; }

  [[nodiscard]] uint64_t size_in_bits() const { return serialized_bits(*this); }
  void write(word_writer& w) const;
  static bit_vector read(word_reader& r);

 private:
  void build_index();
  [[nodiscard]] size_t rank1_unchecked(size_t i) const;

  std::vector<uint64_t> words_;
  size_t n_ = 0;
  size_t ones_ = 0;
  std::vector<uint64_t> super_rank_;  // ones before each superblock, plus a total sentinel
  std::vector<uint64_t> sample1_;     // superblock holding the (k*kSelectSample+1)-th one
  std::vector<uint64_t> sample0_;
};

}  // namespace topzdd
