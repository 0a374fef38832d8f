#pragma once

#include <stdexcept>
#include <string>

namespace splitparse {

// Malformed files, trees, sequences or configs. Fail-fast with a message
// that names the offending location (line/column, decision index, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN/Inf encountered during optimization or loss evaluation.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse: shape mismatch, out-of-range index, double backward.
struct InvalidArgument : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace splitparse
