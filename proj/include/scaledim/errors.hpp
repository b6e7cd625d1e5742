#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scaledim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An orbit iterate left the trapping square; carries the iteration index.
struct EscapedOrbit : Error {
  std::size_t iteration;
  explicit EscapedOrbit(std::size_t it)
      : Error("orbit escaped the trapping region at iteration " + std::to_string(it)),
        iteration(it) {}
};

struct PointOutsideBox : Error {
  std::size_t index;
  explicit PointOutsideBox(std::size_t i)
      : Error("point " + std::to_string(i) + " lies outside the analysis box"), index(i) {}
};

/// Factorial correlation sum requested with fewer samples than its rank.
struct InsufficientSample : Error {
  using Error::Error;
};

struct ScheduleBelowMicroScale : Error {
  using Error::Error;
};

struct DegenerateInterval : Error {
  using Error::Error;
};

struct AnchorNotInSchedule : Error {
  using Error::Error;
};

struct BoundsNotInSchedule : Error {
  using Error::Error;
};

struct NonpositiveDenominator : Error {
  using Error::Error;
};

struct ScheduleMismatch : Error {
  using Error::Error;
};

struct DegenerateAbscissa : Error {
  using Error::Error;
};

}  // namespace scaledim
