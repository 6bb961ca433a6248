#include "topzdd/bit_sequence.hpp"

namespace topzdd {

std::string_view to_string(bit_encoding e) {
  switch (e) {
    case bit_encoding::plain: return "plain";
    case bit_encoding::sparse: return "sparse";
    case bit_encoding::flipped_sparse: return "flipped-sparse";
  }
  return "?";
}

bit_sequence::bit_sequence(const std::vector<bool>& bits, bit_encoding enc) : enc_(enc), n_(bits.size()) {
  switch (enc) {
    case bit_encoding::plain:
      plain_ = bit_vector(bits);
      break;
    case bit_encoding::sparse:
      sparse_ = sparse_bit_vector(bits);
      break;
    case bit_encoding::flipped_sparse: {
      std::vector<bool> flipped(bits.size());
      for (size_t i = 0; i < bits.size(); ++i) flipped[i] = !bits[i];
      sparse_ = sparse_bit_vector(flipped);
      break;
    }
  }
}

bit_sequence bv_auto(const std::vector<bool>& bits) {
  size_t ones = 0;
  for (bool b : bits) ones += b ? 1 : 0;
  const size_t n = bits.size();
  if (4 * ones < n) return {bits, bit_encoding::sparse};
  if (4 * (n - ones) < n) return {bits, bit_encoding::flipped_sparse};
  return {bits, bit_encoding::plain};
}

std::vector<bool> unary_code(const std::vector<uint64_t>& counts) {
  std::vector<bool> out;
  for (uint64_t c : counts) {
    out.insert(out.end(), c, true);
    out.push_back(false);
  }
  return out;
}

bool bit_sequence::access(size_t i) const {
  switch (enc_) {
    case bit_encoding::plain: return plain_.access(i);
    case bit_encoding::sparse: return sparse_.access(i);
    case bit_encoding::flipped_sparse: return !sparse_.access(i);
  }
  return false;
}

size_t bit_sequence::rank1(size_t i) const {
  switch (enc_) {
    case bit_encoding::plain: return plain_.rank1(i);
    case bit_encoding::sparse: return sparse_.rank1(i);
    case bit_encoding::flipped_sparse: return sparse_.rank0(i);
  }
  return 0;
}

size_t bit_sequence::select1(size_t j) const {
  switch (enc_) {
    case bit_encoding::plain: return plain_.select1(j);
    case bit_encoding::sparse: return sparse_.select1(j);
    case bit_encoding::flipped_sparse: return sparse_.select0(j);
  }
  return 0;
}

size_t bit_sequence::select0(size_t j) const {
  switch (enc_) {
    case bit_encoding::plain: return plain_.select0(j);
    case bit_encoding::sparse: return sparse_.select0(j);
    case bit_encoding::flipped_sparse: return sparse_.select1(j);
  }
  return 0;
}

void bit_sequence::write(word_writer& w) const {
  w.put(static_cast<uint64_t>(enc_));
  if (enc_ == bit_encoding::plain) plain_.write(w); else sparse_.write(w);
}

bit_sequence bit_sequence::read(word_reader& r) {
  bit_sequence s;
  const uint64_t tag = r.get();
  if (tag > 2) throw format_error("bit_sequence: unknown encoding tag");
  s.enc_ = static_cast<bit_encoding>(tag);
  if (s.enc_ == bit_encoding::plain) {
    s.plain_ = bit_vector::read(r);
    s.n_ = s.plain_.size();
  } else {
    s.sparse_ = sparse_bit_vector::read(r);
    s.n_ = s.sparse_.size();
  }
  return s;
}

}  // namespace topzdd
