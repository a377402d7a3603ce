#pragma once

#include <stdexcept>
#include <string>

namespace courant {

// base for everything this library throws
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed data handed to us from outside (bad JSON, bad flag values, ...);
// the CLI maps this to exit code 2
struct input_error : error {
  using error::error;
};

// a decomposition was asked of a section that is not fiberwise linear;
// witness holds a printable offending monomial or coefficient
struct not_linear : error {
  std::string witness;
  not_linear(const std::string& what, std::string witness_)
      : error(what + " (witness: " + witness_ + ")"), witness(std::move(witness_)) {}
};

}  // namespace courant
