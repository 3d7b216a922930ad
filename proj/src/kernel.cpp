#include "weakbem/kernel.hpp"

#include "weakbem/error.hpp"

#include <cmath>
#include <string>

namespace weakbem {

Wavenumber::Wavenumber(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ContractError("wavenumber must be positive and finite, got " + std::to_string(k));
  }
}

Complex green_kernel(double k, const Point& x, const Point& y) {
  const double r = (x - y).norm();
  if (r == 0.0) {
    throw SingularityError("Green's function evaluated at coincident points");
  }
  return std::polar(kInvFourPi / r, k * r);
}

Complex green_normal_derivative(double k, const Point& x, const Point& y, const Point& normal_y) {
  const Point d = y - x;
  const double r = d.norm();
  if (r == 0.0) {
    throw SingularityError("double-layer kernel evaluated at coincident points");
  }
  const Complex radial = Complex(-1.0, k * r) * std::polar(kInvFourPi / (r * r * r), k * r);
  return radial * d.dot(normal_y);
}

}  // namespace weakbem
