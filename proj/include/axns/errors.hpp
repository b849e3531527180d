#pragma once
/// @file errors.hpp
/// @brief Typed error hierarchy for the axisymmetric swirl verification library.
///
/// Every failure mode a caller is expected to branch on is a distinct type so
/// tests can assert the exact condition. All derive from axns::Error, which
/// derives from std::runtime_error; the what() string always carries context.

#include <stdexcept>
#include <string>

namespace axns {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define AXNS_ERROR(Name)                                          \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(msg) {}         \
  }

// Geometry and regions.
AXNS_ERROR(AxisIncluded);        // grid would touch or cross r = 0
AXNS_ERROR(GridTooCoarse);       // fewer than 8 nodes in a direction
AXNS_ERROR(EmptyRegion);         // region mask contains no grid nodes
AXNS_ERROR(RegionNotCovered);    // region or time window exceeds the data
AXNS_ERROR(BadSigmaOrder);       // cutoff requires 5/8 <= sigma2 < sigma1 <= 1
AXNS_ERROR(GammaNotGreaterThanOne);
AXNS_ERROR(DeltaOutOfRange);     // cutoff exponent outside (0, 3/4]
AXNS_ERROR(NegativeLambda);      // non-finite / negative sup of |v_theta|
AXNS_ERROR(NonPositiveField);    // ladder input must be strictly positive
AXNS_ERROR(ShapeMismatch);       // fields/grids with incompatible shapes

// Numerics.
AXNS_ERROR(CflViolation);        // dt exceeds the stability precondition
AXNS_ERROR(DiscretizationFault); // internally inconsistent discrete data

struct NonConvergence : Error {
  int iterations;
  double residual;
  NonConvergence(const std::string& msg, int it, double res)
      : Error(msg), iterations(it), residual(res) {}
};

// Config and I/O.
struct ParseError : Error {
  int line;
  std::string key;
  ParseError(const std::string& msg, int line_, std::string key_)
      : Error(msg), line(line_), key(std::move(key_)) {}
};

struct ValidationError : Error {
  std::string key;
  ValidationError(const std::string& msg, std::string key_)
      : Error(msg), key(std::move(key_)) {}
};

AXNS_ERROR(IoError);
AXNS_ERROR(BadMagic);
AXNS_ERROR(VersionMismatch);
AXNS_ERROR(TruncatedFile);

#undef AXNS_ERROR

}  // namespace axns
