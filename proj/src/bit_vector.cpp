#include "topzdd/bit_vector.hpp"

#include <algorithm>
#include <string>

namespace topzdd {

bit_vector::bit_vector(const std::vector<bool>& bits) : words_((bits.size() + 63) / 64, 0), n_(bits.size()) {
  for (size_t i = 0; i < n_; ++i) {
    if (bits[i]) words_[i >> 6] |= uint64_t{1} << (i & 63);
  }
  build_index();
}

bit_vector::bit_vector(std::vector<uint64_t> words, size_t n) : words_(std::move(words)), n_(n) {
  words_.resize((n_ + 63) / 64, 0);
  if (n_ % 64 != 0) words_.back() &= bits::low_mask(n_ % 64);
  build_index();
}

void bit_vector::build_index() {
  const size_t nsuper = (words_.size() + kSuperWords - 1) / kSuperWords;
  super_rank_.assign(nsuper + 1, 0);
  sample1_.clear();
  sample0_.clear();
  uint64_t ones = 0;
  for (size_t sb = 0; sb < nsuper; ++sb) {
    super_rank_[sb] = ones;
    const size_t begin = sb * kSuperWords;
    const size_t end = std::min(words_.size(), begin + kSuperWords);
    uint64_t before = ones;
    for (size_t w = begin; w < end; ++w) ones += static_cast<uint64_t>(std::popcount(words_[w]));
    const uint64_t zeros_before = std::min<uint64_t>(begin * 64, n_) - before;
    const uint64_t zeros_after = std::min<uint64_t>(end * 64, n_) - ones;
    // record each sample point that falls inside this superblock
    while (sample1_.size() * kSelectSample < ones && sample1_.size() * kSelectSample >= before) {
      sample1_.push_back(sb);
    }
    while (sample0_.size() * kSelectSample < zeros_after && sample0_.size() * kSelectSample >= zeros_before) {
      sample0_.push_back(sb);
    }
  }
  super_rank_[nsuper] = ones;
  ones_ = ones;
}

bool bit_vector::access(size_t i) const {
  if (i == 0 || i > n_) {
    throw range_error("bit_vector::access index " + std::to_string(i) + " outside [1," + std::to_string(n_) + "]");
  }
  return get0(i - 1);
}

size_t bit_vector::rank1_unchecked(size_t i) const {
  const size_t w = i >> 6;
  const size_t sb = w / kSuperWords;
  size_t r = super_rank_[sb];
  for (size_t k = sb * kSuperWords; k < w; ++k) r += static_cast<size_t>(std::popcount(words_[k]));
  if ((i & 63) != 0) r += static_cast<size_t>(std::popcount(words_[w] & bits::low_mask(i & 63)));
  return r;
}

size_t bit_vector::rank1(size_t i) const {
  if (i > n_) throw range_error("bit_vector::rank index " + std::to_string(i) + " > " + std::to_string(n_));
  return rank1_unchecked(i);
}

size_t bit_vector::select1(size_t j) const {
  if (j == 0 || j > ones_) throw not_found_error("bit_vector::select1 rank " + std::to_string(j) + " out of range");
  const size_t k = j - 1;
  size_t lo = sample1_[k / kSelectSample];
  size_t hi = k / kSelectSample + 1 < sample1_.size() ? sample1_[k / kSelectSample + 1] + 1 : super_rank_.size() - 1;
  // last superblock with super_rank_ <= k
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (super_rank_[mid] <= k) lo = mid; else hi = mid;
  }
  size_t remaining = k - super_rank_[lo];
  for (size_t w = lo * kSuperWords;; ++w) {
    const auto c = static_cast<size_t>(std::popcount(words_[w]));
    if (remaining < c) return w * 64 + bits::select_in_word(words_[w], static_cast<unsigned>(remaining)) + 1;
    remaining -= c;
  }
}

size_t bit_vector::select0(size_t j) const {
  if (j == 0 || j > zeros()) throw not_found_error("bit_vector::select0 rank " + std::to_string(j) + " out of range");
  const size_t k = j - 1;
  auto zeros_before = [&](size_t sb) { return sb * kSuperBits - super_rank_[sb]; };
  size_t lo = sample0_[k / kSelectSample];
  size_t hi = k / kSelectSample + 1 < sample0_.size() ? sample0_[k / kSelectSample + 1] + 1 : super_rank_.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (zeros_before(mid) <= k) lo = mid; else hi = mid;
  }
  size_t remaining = k - zeros_before(lo);
  for (size_t w = lo * kSuperWords;; ++w) {
    const uint64_t inv = ~words_[w];
    const auto c = static_cast<size_t>(std::popcount(inv));
    if (remaining < c) return w * 64 + bits::select_in_word(inv, static_cast<unsigned>(remaining)) + 1;
    remaining -= c;
  }
}

void bit_vector::write(word_writer& w) const {
  w.put(n_);
  w.put_array(words_);
  w.put_array(super_rank_);
  w.put_array(sample1_);
  w.put_array(sample0_);
}

bit_vector bit_vector::read(word_reader& r) {
  bit_vector bv;
  bv.n_ = r.get();
  bv.words_ = r.get_array();
  bv.super_rank_ = r.get_array();
  bv.sample1_ = r.get_array();
  bv.sample0_ = r.get_array();
  if (bv.words_.size() != (bv.n_ + 63) / 64 || bv.super_rank_.empty() ||
      bv.super_rank_.size() != (bv.words_.size() + kSuperWords - 1) / kSuperWords + 1) {
    throw format_error("bit_vector: inconsistent lengths");
  }
  bv.ones_ = bv.super_rank_.back();
  return bv;
}

}  // namespace topzdd
