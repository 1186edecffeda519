#pragma once

#include <stdexcept>

namespace covbal {

// Input that cannot be analysed: malformed files, unequal groups, singular
// covariance and the like.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine produced a value outside its mathematical range by more
// than round-off.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace covbal
