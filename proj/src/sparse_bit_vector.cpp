#include "topzdd/sparse_bit_vector.hpp"

#include <bit>
#include <string>

namespace topzdd {

sparse_bit_vector::sparse_bit_vector(const std::vector<bool>& bits) : n_(bits.size()) {
  std::vector<uint64_t> positions;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) positions.push_back(i + 1);
  }
  build(positions);
}

sparse_bit_vector::sparse_bit_vector(const std::vector<uint64_t>& positions, size_t n) : n_(n) {
  for (size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] == 0 || positions[k] > n || (k > 0 && positions[k] <= positions[k - 1])) {
      throw build_error("sparse_bit_vector: positions must be strictly increasing within [1,n]");
    }
  }
  build(positions);
}

void sparse_bit_vector::build(const std::vector<uint64_t>& positions) {
  const size_t m = positions.size();
  low_width_ = 0;
  if (m > 0 && n_ > m) low_width_ = static_cast<unsigned>(std::bit_width(n_ / m)) - 1;
  std::vector<uint64_t> lows(m);
  const uint64_t buckets = n_ == 0 ? 0 : ((n_ - 1) >> low_width_) + 1;
  std::vector<uint64_t> high_words((m + buckets + 63) / 64, 0);
  for (size_t k = 0; k < m; ++k) {
    const uint64_t v = positions[k] - 1;
    lows[k] = v & bits::low_mask(low_width_);
    const uint64_t pos = (v >> low_width_) + k;
    high_words[pos >> 6] |= uint64_t{1} << (pos & 63);
  }
  low_ = packed_int_array(lows, low_width_);
  high_ = bit_vector(std::move(high_words), m + buckets);
}

uint64_t sparse_bit_vector::value(size_t k) const {
  const uint64_t high = high_.select1(k + 1) - 1 - k;
  return (high << low_width_) | low_[k];
}

size_t sparse_bit_vector::select1(size_t j) const {
  if (j == 0 || j > ones()) {
    throw not_found_error("sparse_bit_vector::select1 rank " + std::to_string(j) + " out of range");
  }
  return value(j - 1) + 1;
}

size_t sparse_bit_vector::rank1(size_t i) const {
  if (i > n_) throw range_error("sparse_bit_vector::rank index " + std::to_string(i) + " > " + std::to_string(n_));
  if (i == 0 || ones() == 0) return 0;
  const uint64_t v = i - 1;  // count values <= v
  const uint64_t bucket = v >> low_width_;
  // ones whose high part < bucket = (position of bucket-th zero) - bucket
  size_t k = bucket == 0 ? 0 : high_.select0(bucket) - bucket;
  // the bucket's ones follow contiguously in the high bitvector
  size_t pos = k + bucket;  // 0-based index into high_ of the first candidate
  while (k < ones() && pos < high_.size() && high_.get0(pos)) {
    if ((low_[k] | (bucket << low_width_)) > v) break;
    ++k;
    ++pos;
  }
  return k;
}

bool sparse_bit_vector::access(size_t i) const {
  if (i == 0 || i > n_) {
    throw range_error("sparse_bit_vector::access index " + std::to_string(i) + " outside [1," + std::to_string(n_) + "]");
  }
  return rank1(i) - rank1(i - 1) == 1;
}

size_t sparse_bit_vector::select0(size_t j) const {
  if (j == 0 || j > zeros()) {
    throw not_found_error("sparse_bit_vector::select0 rank " + std::to_string(j) + " out of range");
  }
  // smallest i with rank0(i) >= j
  size_t lo = j;
  size_t hi = n_;
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (rank0(mid) >= j) hi = mid; else lo = mid + 1;
  }
  return lo;
}

void sparse_bit_vector::write(word_writer& w) const {
  w.put(n_);
  low_.write(w);
  high_.write(w);
}

sparse_bit_vector sparse_bit_vector::read(word_reader& r) {
  sparse_bit_vector s;
  s.n_ = r.get();
  s.low_ = packed_int_array::read(r);
  s.high_ = bit_vector::read(r);
  s.low_width_ = s.low_.width();
  if (s.high_.ones() != s.low_.size()) throw format_error("sparse_bit_vector: high/low mismatch");
  return s;
}

}  // namespace topzdd
