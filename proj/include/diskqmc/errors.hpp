#pragma once

#include <stdexcept>
#include <string>

namespace diskqmc {

// Bad argument values (non-positive radius, negative curvature, ...).
struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A geometric precondition failed (circles not tangent, overlap, ...).
struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Both Descartes center candidates failed tangency validation.
struct degenerate_configuration_error : geometry_error {
  using geometry_error::geometry_error;
};

// File could not be read/parsed.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested fit does not have enough usable points.
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace diskqmc
