#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "topzdd/errors.hpp"

namespace topzdd {

// Little-endian 64-bit word stream used by every serializable structure.
class word_writer {
 public:
  void put(uint64_t w) { words_.push_back(w); }

  void put_array(std::span<const uint64_t> ws) {
    put(ws.size());
    words_.insert(words_.end(), ws.begin(), ws.end());
  }

  template <typename Int>
  void put_int_array(std::span<const Int> xs) {
    put(xs.size());
    for (Int x : xs) put(static_cast<uint64_t>(x));
  }

  [[nodiscard]] size_t size() const { return words_.size(); }
  [[nodiscard]] const std::vector<uint64_t>& words() const { return words_; }

 private:
  std::vector<uint64_t> words_;
};

class word_reader {
 public:
  explicit word_reader(std::span<const uint64_t> words) : words_(words) {}

  uint64_t get() {
    if (pos_ >= words_.size()) throw format_error("truncated component");
    return words_[pos_++];
  }

  std::vector<uint64_t> get_array() { return get_array_of(get()); }

  // `len` words without a length prefix
  std::vector<uint64_t> get_array_of(uint64_t len) {
    if (len > words_.size() - pos_) throw format_error("array length exceeds component");
    std::vector<uint64_t> out(words_.begin() + static_cast<std::ptrdiff_t>(pos_),
                              words_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    pos_ += len;
    return out;
  }

  template <typename Int>
  std::vector<Int> get_int_array() {
    const auto raw = get_array();
    return std::vector<Int>(raw.begin(), raw.end());
  }

  [[nodiscard]] bool at_end() const { return pos_ == words_.size(); }

 private:
  std::span<const uint64_t> words_;
  size_t pos_ = 0;
};

// Serialized size of anything exposing write(word_writer&).
template <typename T>
uint64_t serialized_bits(const T& x) {
  word_writer w;
  x.write(w);
  return static_cast<uint64_t>(w.size()) * 64;
}

}  // namespace topzdd
