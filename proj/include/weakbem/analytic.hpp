#pragma once

#include "weakbem/kernel.hpp"
#include "weakbem/operators.hpp"
#include "weakbem/spaces.hpp"

#include <array>
#include <optional>

namespace weakbem {

struct TraceSolution;

/// Two interior point sources used as the manufactured exterior solution.
struct PointSourceData {
  static constexpr std::array<double, 3> source_a{0.1, 0.5, 0.5};
  static constexpr std::array<double, 3> source_b{0.1, 0.25, 0.25};

  static Point first() { return {source_a[0], source_a[1], source_a[2]}; }
  static Point second() { return {source_b[0], source_b[1], source_b[2]}; }
};

/// sum over sources s of exp(ik|x-s|) / |x-s|. Throws SingularityError at a
/// source.
Complex point_source_field(double k, const Point& x);

/// Normal derivative of point_source_field:
/// sum (ik|r| - 1) exp(ik|r|) / |r|^3 (r . n) with r = x - s.
Complex point_source_neumann_trace(double k, const Point& x, const Point& normal);

/// Spherical Bessel functions of the first (j) and second (y) kind and their
/// derivatives. j uses closed forms for l <= 2, upward recurrence while
/// l < x and Miller's downward recurrence otherwise; y always recurs upward.
double spherical_bessel_j(int l, double x);
double spherical_bessel_y(int l, double x);
double spherical_bessel_j_derivative(int l, double x);
double spherical_bessel_y_derivative(int l, double x);
Complex spherical_hankel1(int l, double x);
Complex spherical_hankel1_derivative(int l, double x);

/// Eigenvalue of V (ik j_l h_l) or W (-ik^3 j_l' h_l') on the unit sphere
/// for spherical harmonics of degree l. Requires l <= 10 and k >= 0.5.
Complex sphere_symbol_oracle(OperatorKind kind, int l, double k);

/// Smallest k in [0.1, 20] with k j_l'(k) + beta j_l(k) = 0, i.e. a Robin
/// eigenvalue k^2 of the interior Laplacian on the unit ball. Empty when beta
/// is not real or no root exists in the interval.
std::optional<double> robin_wavenumber_oracle(int l, Complex beta);

/// Relative L2(Gamma) errors of a trace solution. The H^{+/-1/2} norms are
/// not computed; L2 is used as a surrogate throughout.
struct ErrorMetric {
  double rel_l2_u = 0.0;
  double rel_l2_lambda = 0.0;
  /// |beta|^{1/2} ||u_h - u||_{L2}, absolute.
  double penalty_l2_u = 0.0;
  /// Set when an exact norm vanished; the corresponding rel_ field then holds
  /// the absolute error.
  bool zero_exact_norm = false;
};

/// The exact functions are evaluated at quadrature points of the flat
/// triangles with the normalized interpolant of the area-weighted vertex
/// normals, the second-order approximation of the smooth surface normal.
ErrorMetric relative_error(const TraceSolution& solution, const BoundaryFunction& exact_u,
                           const BoundaryFunction& exact_lambda, Complex beta, int quadrature_order = 6);

}  // namespace weakbem
