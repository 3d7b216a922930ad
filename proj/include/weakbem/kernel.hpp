#pragma once

#include "weakbem/mesh.hpp"

#include <complex>
#include <cstddef>
#include <numbers>

namespace weakbem {

using Complex = std::complex<double>;

/// Positive real wavenumber.
class Wavenumber {
public:
  explicit Wavenumber(double k);
  double value() const noexcept { return k_; }

private:
  double k_;
};

inline constexpr double kInvFourPi = 0.25 * std::numbers::inv_pi;

/// Helmholtz fundamental solution exp(ik|x-y|) / (4 pi |x-y|). Accepts k >= 0
/// so that the Laplace limit can be evaluated directly. Throws
/// SingularityError when x == y.
Complex green_kernel(double k, const Point& x, const Point& y);

/// Derivative of green_kernel with respect to y in direction `normal_y`:
/// (ik r - 1) exp(ik r) / (4 pi r^3) * (y - x) . n_y  with r = |x - y|.
Complex green_normal_derivative(double k, const Point& x, const Point& y, const Point& normal_y);

/// Elementwise cos and sin of `n` finite values, vectorized where the
/// platform math library allows.
void cos_sin_batch(const double* x, double* c, double* s, std::size_t n);

}  // namespace weakbem
