#pragma once

#include <stdexcept>
#include <string>

namespace percmsm {

// Data (or lattice) carries no usable moment information: all-extreme colour
// frequencies, or a patch without adjacent pairs.
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed config or field file; message names the offending key or line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace percmsm
