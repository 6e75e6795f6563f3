#pragma once

#include <stdexcept>
#include <string>

namespace moran {

// Malformed or out-of-range input: bad documents, violated preconditions.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A configured search or precision bound was reached before a verdict.
class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised by constructions that need N_j | b_j; carries the first failing level.
class NotSpectralError : public std::domain_error {
public:
  explicit NotSpectralError(std::size_t level)
      : std::domain_error("not spectral: count does not divide base at level " +
                          std::to_string(level)),
        level_(level) {}

  std::size_t level() const noexcept { return level_; }

private:
  std::size_t level_;
};

} // namespace moran
