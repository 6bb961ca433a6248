#pragma once

#include <stdexcept>
#include <string>

namespace topzdd {

// Index outside the valid range of a structure.
class range_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// select/search for an element that does not exist.
class not_found_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural invariant was violated (ordering, merge legality, corruption).
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class build_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corrupt or incompatible container file.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topzdd
