#pragma once

#include <cmath>
#include <stdexcept>

namespace emalg {

// Element of the scalar group (0, oo): a dilation coefficient a, b, c or
// eps. The type invariant is strict positivity and finiteness; the group is
// closed under multiplication and reciprocal. User-facing entry points
// additionally restrict to [kUserScalarMin, kUserScalarMax] via
// user_scalar(), so a reciprocal arriving from a config can never overflow.
// Internal limit schedules deliberately go below that band; the dilations
// there act on O(eps) displacements and stay well conditioned.
class Scalar {
 public:
  explicit Scalar(double v) : v_(v) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument("Scalar must be strictly positive and finite");
  }

  double value() const { return v_; }
  Scalar reciprocal() const { return Scalar(1.0 / v_); }

  friend Scalar operator*(Scalar a, Scalar b) { return Scalar(a.v_ * b.v_); }

 private:
  double v_;
};

inline constexpr double kUserScalarMin = 1e-6;
inline constexpr double kUserScalarMax = 1e6;

// Range-checked constructor for scalars arriving from flags or configs.
inline Scalar user_scalar(double v) {
  if (!(v >= kUserScalarMin && v <= kUserScalarMax))
    throw std::invalid_argument("scalar outside accepted range [1e-6, 1e6]");
  return Scalar(v);
}

}  // namespace emalg
