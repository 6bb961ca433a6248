#include "topzdd/packed_array.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "topzdd/bit_vector.hpp"

namespace topzdd {

unsigned packed_int_array::width_for(uint64_t max_value) {
  return max_value == 0 ? 1U : static_cast<unsigned>(std::bit_width(max_value));
}

packed_int_array::packed_int_array(std::span<const uint64_t> values) {
  const uint64_t mx = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
  width_ = width_for(mx);
  pack(values);
}

packed_int_array::packed_int_array(std::span<const uint64_t> values, unsigned width) {
  if (width > 64) throw build_error("packed_int_array width > 64");
  width_ = width;
  for (uint64_t v : values) {
    if (width < 64 && (v >> width) != 0) throw build_error("packed_int_array value exceeds width");
  }
  pack(values);
}

void packed_int_array::pack(std::span<const uint64_t> values) {
  n_ = values.size();
  words_.assign((n_ * width_ + 63) / 64, 0);
  if (width_ == 0) return;
  for (size_t i = 0; i < n_; ++i) {
    const size_t bit = i * width_;
    const size_t w = bit >> 6;
    const unsigned off = bit & 63;
    words_[w] |= values[i] << off;
    if (off + width_ > 64) words_[w + 1] |= values[i] >> (64 - off);
  }
}

uint64_t packed_int_array::operator[](size_t i) const {
  if (width_ == 0) return 0;
  const size_t bit = i * width_;
  const size_t w = bit >> 6;
  const unsigned off = bit & 63;
  uint64_t v = words_[w] >> off;
  if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
  return v & bits::low_mask(width_);
}

uint64_t packed_int_array::at(size_t i) const {
  if (i >= n_) throw range_error("packed_int_array index " + std::to_string(i) + " >= " + std::to_string(n_));
  return (*this)[i];
}

std::vector<uint64_t> packed_int_array::to_vector() const {
  std::vector<uint64_t> out(n_);
  for (size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
  return out;
}

void packed_int_array::write(word_writer& w) const {
  w.put(n_ | (static_cast<uint64_t>(width_) << 56));
  for (uint64_t x : words_) w.put(x);
}

packed_int_array packed_int_array::read(word_reader& r) {
  packed_int_array a;
  const uint64_t head = r.get();
  a.n_ = head & bits::low_mask(56);
  a.width_ = static_cast<unsigned>(head >> 56);
  if (a.width_ > 64) throw format_error("packed_int_array width");
  const size_t nwords = (a.n_ * a.width_ + 63) / 64;
  a.words_.resize(nwords);
  for (auto& x : a.words_) x = r.get();
  return a;
}

}  // namespace topzdd
