#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace svpc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy; the CLI maps these to exit codes (input 10, grid 11,
// internal 12).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-facing input: unknown model, malformed file, bad parameter.
class InputError : public Error {
 public:
  using Error::Error;
};

// Grid construction or compatibility failure (asymmetric axes, mismatched
// specs, a node whose group image is off-grid, ...).
class GridError : public Error {
 public:
  using Error::Error;
};

// A function that was required to be invariant under the signed-permutation
// group is not.
class InvarianceError : public GridError {
 public:
  using GridError::GridError;
};

// Unsupported matrix/vector dimension (only d = 2, 3 are implemented).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A lifted point fails the image-membership relations; carries the residual.
class NotInImageError : public Error {
 public:
  NotInImageError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// An iterative solver honestly failed to converge within its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// An internal invariant broke: a bug, not a user problem.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Deterministic random source. The raw engine is standard mt19937_64 but the
// real-valued draws are derived from its bit stream by hand so that identical
// seeds give identical doubles on every platform/stdlib.
class RandomState {
 public:
  explicit RandomState(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1): top 53 bits of the stream.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (pair cached).
  double gaussian();

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Shortest round-trip decimal for a double; infinities become "+inf"/"-inf".
std::string format_double(double v);

// Runs fn over [0, n) split into contiguous chunks, one per worker thread.
// fn(begin, end) must only write to its own chunk; results are deterministic
// regardless of thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace svpc
