#include "weakbem/analytic.hpp"

#include "weakbem/error.hpp"
#include "weakbem/formulation.hpp"
#include "weakbem/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace weakbem {

namespace {

Complex source_term(double k, const Point& x, const Point& s) {
  const double r = (x - s).norm();
  if (r == 0.0) {
    throw SingularityError("point-source field evaluated at a source");
  }
  return std::polar(1.0 / r, k * r);
}

Complex source_flux(double k, const Point& x, const Point& s, const Point& n) {
  const Point d = x - s;
  const double r = d.norm();
  if (r == 0.0) {
    throw SingularityError("point-source flux evaluated at a source");
  }
  return Complex(-1.0, k * r) * std::polar(1.0 / (r * r * r), k * r) * d.dot(n);
}

void check_order(int l) {
  if (l < 0) {
    throw ContractError("spherical Bessel order must be nonnegative");
  }
}

}  // namespace

Complex point_source_field(double k, const Point& x) {
  return source_term(k, x, PointSourceData::first()) + source_term(k, x, PointSourceData::second());
}

Complex point_source_neumann_trace(double k, const Point& x, const Point& normal) {
  return source_flux(k, x, PointSourceData::first(), normal) + source_flux(k, x, PointSourceData::second(), normal);
}

double spherical_bessel_j(int l, double x) {
  check_order(l);
  if (x == 0.0) {
    return l == 0 ? 1.0 : 0.0;
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double j0 = s / x;
  if (l == 0) {
    return j0;
  }
  const double j1 = s / (x * x) - c / x;
  if (l == 1) {
    return j1;
  }
  if (l == 2) {
    return (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
  }
  if (static_cast<double>(l) < x) {
    double prev = j0;
    double cur = j1;
    for (int n = 1; n < l; ++n) {
      const double next = (2.0 * n + 1.0) / x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // Miller: recur downward from well above l, then normalize against
  // whichever of j_0, j_1 is larger in magnitude.
  const int start = l + 20 + static_cast<int>(std::sqrt(40.0 * (l + 10)));
  double next = 0.0;
  double cur = 1e-300;
  double at_l = 0.0;
  double at_1 = 0.0;
  for (int n = start; n > 0; --n) {
    const double prev = (2.0 * n + 1.0) / x * cur - next;
    next = cur;
    cur = prev;
    if (n - 1 == l) {
      at_l = cur;
    }
    if (n - 1 == 1) {
      at_1 = cur;
    }
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      at_l *= 1e-250;
      at_1 *= 1e-250;
    }
  }
  return std::abs(j0) >= std::abs(j1) ? at_l * (j0 / cur) : at_l * (j1 / at_1);
}

double spherical_bessel_y(int l, double x) {
  check_order(l);
  if (x == 0.0) {
    throw SingularityError("spherical Bessel y is singular at 0");
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  double prev = -c / x;
  if (l == 0) {
    return prev;
  }
  double cur = -c / (x * x) - s / x;
  for (int n = 1; n < l; ++n) {
    const double next = (2.0 * n + 1.0) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double spherical_bessel_j_derivative(int l, double x) {
  check_order(l);
  if (l == 0) {
    return -spherical_bessel_j(1, x);
  }
  if (x == 0.0) {
    return l == 1 ? 1.0 / 3.0 : 0.0;
  }
  return spherical_bessel_j(l - 1, x) - (l + 1.0) / x * spherical_bessel_j(l, x);
}

double spherical_bessel_y_derivative(int l, double x) {
  check_order(l);
  if (l == 0) {
    return -spherical_bessel_y(1, x);
  }
  return spherical_bessel_y(l - 1, x) - (l + 1.0) / x * spherical_bessel_y(l, x);
}

Complex spherical_hankel1(int l, double x) { return {spherical_bessel_j(l, x), spherical_bessel_y(l, x)}; }

Complex spherical_hankel1_derivative(int l, double x) {
  return {spherical_bessel_j_derivative(l, x), spherical_bessel_y_derivative(l, x)};
}

Complex sphere_symbol_oracle(OperatorKind kind, int l, double k) {
  if (l < 0 || l > 10) {
    throw ContractError("sphere symbol oracle supports 0 <= l <= 10, got " + std::to_string(l));
  }
  if (!(k >= 0.5)) {
    throw ContractError("sphere symbol oracle is restricted to k >= 0.5");
  }
  const Complex i(0.0, 1.0);
  switch (kind) {
    case OperatorKind::V:
      return i * k * spherical_bessel_j(l, k) * spherical_hankel1(l, k);
    case OperatorKind::W:
      return -i * k * k * k * spherical_bessel_j_derivative(l, k) * spherical_hankel1_derivative(l, k);
    default:
      throw ContractError("sphere symbol oracle supports V and W only");
  }
}

std::optional<double> robin_wavenumber_oracle(int l, Complex beta) {
  if (beta.imag() != 0.0) {
    return std::nullopt;
  }
  const double b = beta.real();
  auto f = [l, b](double k) { return k * spherical_bessel_j_derivative(l, k) + b * spherical_bessel_j(l, k); };
  constexpr double lo = 0.1;
  constexpr double hi = 20.0;
  constexpr double step = 1e-3;
  double a = lo;
  double fa = f(a);
  while (a < hi) {
    const double c = std::min(a + step, hi);
    const double fc = f(c);
    if (fa == 0.0) {
      return a;
    }
    if ((fa < 0.0) != (fc < 0.0)) {
      double left = a;
      double right = c;
      double f_left = fa;
      while (right - left > 1e-13) {
        const double mid = 0.5 * (left + right);
        const double fm = f(mid);
        if ((fm < 0.0) == (f_left < 0.0)) {
          left = mid;
          f_left = fm;
        } else {
          right = mid;
        }
      }
      return 0.5 * (left + right);
    }
    a = c;
    fa = fc;
  }
  return std::nullopt;
}

ErrorMetric relative_error(const TraceSolution& solution, const BoundaryFunction& exact_u,
                           const BoundaryFunction& exact_lambda, Complex beta, int quadrature_order) {
  const Mesh& mesh = solution.space_u.mesh();
  const TriangleRule rule = gauss_triangle(quadrature_order);
  double err_u = 0.0;
  double norm_u = 0.0;
  double err_l = 0.0;
  double norm_l = 0.0;
  // The exact traces belong to the smooth surface the mesh approximates. Face
  // normals would compare against the flux of the polyhedron, which jumps
  // across edges; interpolated vertex normals match the smooth normal to
  // second order.
  const std::vector<Point> vn = vertex_normals(mesh);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    const auto& tri = mesh.triangles()[t];
    const double jac = 2.0 * mesh.areas()[t];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [s, u] = rule.points[q];
      const std::array<double, 3> bary{1.0 - s - u, s, u};
      const Point x = bary[0] * c[0] + bary[1] * c[1] + bary[2] * c[2];
      const Point n = (bary[0] * vn[tri[0]] + bary[1] * vn[tri[1]] + bary[2] * vn[tri[2]]).normalized();
      const double w = rule.weights[q] * jac;
      const Complex eu = exact_u(x, n);
      const Complex el = exact_lambda(x, n);
      err_u += w * std::norm(evaluate(solution.space_u, solution.u, t, bary) - eu);
      err_l += w * std::norm(evaluate(solution.space_lambda, solution.lambda, t, bary) - el);
      norm_u += w * std::norm(eu);
      norm_l += w * std::norm(el);
    }
  }
  ErrorMetric metric;
  metric.penalty_l2_u = std::sqrt(std::abs(beta)) * std::sqrt(err_u);
  metric.zero_exact_norm = norm_u == 0.0 || norm_l == 0.0;
  metric.rel_l2_u = norm_u == 0.0 ? std::sqrt(err_u) : std::sqrt(err_u / norm_u);
  metric.rel_l2_lambda = norm_l == 0.0 ? std::sqrt(err_l) : std::sqrt(err_l / norm_l);
  return metric;
}

}  // namespace weakbem
