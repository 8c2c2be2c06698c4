#pragma once

#include <stdexcept>

namespace ctqw {

// Invalid lattice/model/run parameters. The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A differential-operator stencil requested for a lattice kind that has none
// (the truncated-square tiling only supports the graph Laplacian).
struct UnsupportedStencil : ConfigError {
  using ConfigError::ConfigError;
};

// A numerical guard tripped (Hermiticity, unitarity, norm conservation).
// The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctqw
