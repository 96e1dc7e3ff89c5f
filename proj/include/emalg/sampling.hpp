#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace emalg {

// Deterministic sample source. std::mt19937_64 has a fully specified,
// portable output stream; the uint64 -> double mapping below is done by
// hand because uniform_real_distribution is implementation-defined and the
// verifier promises bit-identical sample streams for a given seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Log-uniform in [lo, hi]; symmetric around sqrt(lo*hi) in log scale.
  // Used for dilation coefficients so small and large scales get equal
  // weight.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Column vector with independent entries uniform in [-halfwidth, halfwidth].
  Eigen::MatrixXd box_vector(int n, double halfwidth) {
    Eigen::MatrixXd v(n, 1);
    for (int i = 0; i < n; ++i) v(i, 0) = uniform(-halfwidth, halfwidth);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace emalg
