#pragma once

#include <stdexcept>

namespace emalg {

// A point or tangent vector left the instance's chart: antipodal sphere
// pair, |v| >= pi in the exponential, near-cut-locus logarithm.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Overflow guard tripped; raised by the unipotent closed-form partial sums
// when an intermediate entry exceeds 1e100 in magnitude.
struct NumericRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A conical-group spec or tangent-group construction failed its sampled
// validation; the message names the violated axiom.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emalg
