#include "weakbem/analytic.hpp"
#include "weakbem/error.hpp"
#include "weakbem/formulation.hpp"
#include "weakbem/kernel.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

using namespace weakbem;

namespace {

const Complex kI(0.0, 1.0);

Point random_exterior_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (;;) {
    const Point p{d(rng), d(rng), d(rng)};
    if (p.norm() > 1.2) {
      return p;
    }
  }
}

TraceSolution linear_traces(int level, const BoundaryFunction& u, const BoundaryFunction& lambda) {
  const auto mesh = std::make_shared<const Mesh>(build_icosphere(level));
  const DofSpace p1(mesh, SpaceKind::P1);
  return {p1, p1, interpolate(p1, u), interpolate(p1, lambda), 3.0, Complex(1.0, -1.0)};
}

}  // namespace

TEST(PointSource, SourcesAreInsideTheSphere) {
  EXPECT_LT(PointSourceData::first().norm(), 1.0);
  EXPECT_LT(PointSourceData::second().norm(), 1.0);
}

TEST(PointSource, ReferenceValue) {
  const Point x{1, 0, 0};
  const double r1 = std::sqrt(1.31);
  const double r2 = std::sqrt(0.935);
  const Complex expected = std::exp(2.0 * kI * r1) / r1 + std::exp(2.0 * kI * r2) / r2;
  const Complex value = point_source_field(2.0, x);
  EXPECT_NEAR(std::abs(value - expected), 0.0, 1e-14);
  EXPECT_NEAR(value.real(), -0.9422, 5e-4);
  EXPECT_NEAR(value.imag(), 1.6247, 5e-4);
}

TEST(PointSource, IsFourPiTimesGreenSumInEitherOrder) {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Point x = random_exterior_point(rng);
    const Complex forward = green_kernel(2.5, x, PointSourceData::first()) + green_kernel(2.5, x, PointSourceData::second());
    const Complex reverse = green_kernel(2.5, x, PointSourceData::second()) + green_kernel(2.5, x, PointSourceData::first());
    const Complex value = point_source_field(2.5, x);
    EXPECT_LT(std::abs(value - 4.0 * std::numbers::pi * forward), 1e-13 * std::abs(value));
    EXPECT_LT(std::abs(value - 4.0 * std::numbers::pi * reverse), 1e-13 * std::abs(value));
  }
}

TEST(PointSource, SingularAtSource) {
  EXPECT_THROW(point_source_field(1.0, PointSourceData::first()), SingularityError);
  EXPECT_THROW(point_source_neumann_trace(1.0, PointSourceData::second(), Point{0, 0, 1}), SingularityError);
}

TEST(PointSource, NeumannTraceMatchesFiniteDifference) {
  std::mt19937 rng(5);
  const double step = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const Point x = random_exterior_point(rng).normalized();
    const Point n = x;
    const Complex fd = (point_source_field(3.0, x + step * n) - point_source_field(3.0, x - step * n)) / (2.0 * step);
    const Complex exact = point_source_neumann_trace(3.0, x, n);
    EXPECT_LT(std::abs(fd - exact) / std::abs(exact), 1e-6);
  }
}

TEST(PointSource, NeumannTraceVanishesForNormalOrthogonalToBothOffsets) {
  const Point x{0.3, -0.8, 0.52};
  const Point n = (x - PointSourceData::first()).cross(x - PointSourceData::second()).normalized();
  EXPECT_LT(std::abs(point_source_neumann_trace(2.0, x, n)), 1e-14);
}

TEST(PointSource, NeumannTraceLaplaceLimit) {
  const Point x = Point{0.6, 0.0, 0.8};
  const Point n = x;
  Complex expected = 0.0;
  for (const Point& s : {PointSourceData::first(), PointSourceData::second()}) {
    const Point r = x - s;
    expected -= r.dot(n) / std::pow(r.norm(), 3);
  }
  EXPECT_LT(std::abs(point_source_neumann_trace(1e-9, x, n) - expected), 1e-8);
}

TEST(PointSource, SatisfiesHelmholtzEquation) {
  std::mt19937 rng(9);
  const double k = 3.0;
  for (int i = 0; i < 5; ++i) {
    const Point x = random_exterior_point(rng);
    const Complex u = point_source_field(k, x);
    double previous = std::numeric_limits<double>::infinity();
    for (double h : {1e-1, 3e-2, 1e-2}) {
      Complex laplacian = -6.0 * u;
      for (int axis = 0; axis < 3; ++axis) {
        Point e = Point::Zero();
        e[axis] = h;
        laplacian += point_source_field(k, x + e) + point_source_field(k, x - e);
      }
      laplacian /= h * h;
      const double residual = std::abs(-laplacian - k * k * u) / std::abs(k * k * u);
      EXPECT_LT(residual, previous);
      previous = residual;
    }
    EXPECT_LT(previous, 1e-3);
  }
}

TEST(SphericalBessel, MatchesStandardLibrary) {
  for (int l = 0; l <= 10; ++l) {
    for (double x = 0.1; x <= 20.0; x += 0.37) {
      const double j = std::sph_bessel(static_cast<unsigned>(l), x);
      const double y = std::sph_neumann(static_cast<unsigned>(l), x);
      EXPECT_NEAR(spherical_bessel_j(l, x), j, 1e-12 * std::max(1.0, std::abs(j)) + 1e-13 * std::abs(j))
          << "l " << l << " x " << x;
      EXPECT_LT(std::abs(spherical_bessel_j(l, x) - j), 1e-10 * std::abs(j) + 1e-300) << "l " << l << " x " << x;
      EXPECT_LT(std::abs(spherical_bessel_y(l, x) - y), 1e-10 * std::abs(y)) << "l " << l << " x " << x;
    }
  }
}

TEST(SphericalBessel, DerivativesMatchRecurrenceIdentity) {
  for (int l = 1; l <= 10; ++l) {
    for (double x : {0.5, 1.7, 4.2, 9.9}) {
      const auto ul = static_cast<unsigned>(l);
      const double jd = std::sph_bessel(ul - 1, x) - (l + 1.0) / x * std::sph_bessel(ul, x);
      const double yd = std::sph_neumann(ul - 1, x) - (l + 1.0) / x * std::sph_neumann(ul, x);
      EXPECT_NEAR(spherical_bessel_j_derivative(l, x), jd, 1e-10 * std::max(1.0, std::abs(jd)));
      EXPECT_NEAR(spherical_bessel_y_derivative(l, x), yd, 1e-10 * std::max(1.0, std::abs(yd)));
      const Complex h = spherical_hankel1(l, x);
      EXPECT_NEAR(h.real(), std::sph_bessel(ul, x), 1e-10 * std::max(1.0, std::abs(h)));
      EXPECT_NEAR(h.imag(), std::sph_neumann(ul, x), 1e-10 * std::max(1.0, std::abs(h)));
    }
  }
  EXPECT_NEAR(spherical_bessel_j_derivative(0, 1.3), -std::sph_bessel(1, 1.3), 1e-14);
  EXPECT_THROW(spherical_bessel_j(-1, 1.0), ContractError);
  EXPECT_THROW(spherical_bessel_y(0, 0.0), SingularityError);
}

TEST(SphereSymbol, SingleLayerDegreeZeroClosedForm) {
  const Complex v = sphere_symbol_oracle(OperatorKind::V, 0, 2.0);
  const Complex expected = std::sin(2.0) / 2.0 * std::exp(2.0 * kI);
  EXPECT_LT(std::abs(v - expected), 1e-14);
  EXPECT_NEAR(v.real(), -0.18918, 1e-4);
  EXPECT_NEAR(v.imag(), 0.41336, 1e-4);
}

TEST(SphereSymbol, HypersingularFormula) {
  for (int l : {0, 1, 4}) {
    const double k = 2.3;
    const Complex expected =
        -kI * k * k * k * spherical_bessel_j_derivative(l, k) * spherical_hankel1_derivative(l, k);
    EXPECT_LT(std::abs(sphere_symbol_oracle(OperatorKind::W, l, k) - expected), 1e-14 * std::abs(expected));
  }
}

TEST(SphereSymbol, ContinuousOnGrid) {
  for (OperatorKind kind : {OperatorKind::V, OperatorKind::W}) {
    for (int l = 0; l <= 10; ++l) {
      // A pole would show up as a second difference comparable to the values.
      const double h = 0.01;
      std::vector<Complex> values;
      double scale = 0.0;
      for (int i = 0; i <= 950; ++i) {
        values.push_back(sphere_symbol_oracle(kind, l, 0.5 + h * i));
        ASSERT_TRUE(std::isfinite(values.back().real()) && std::isfinite(values.back().imag()));
        scale = std::max(scale, std::abs(values.back()));
      }
      for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        EXPECT_LT(std::abs(values[i - 1] - 2.0 * values[i] + values[i + 1]), 1e-3 * scale) << "l " << l << " i " << i;
      }
    }
  }
}

TEST(SphereSymbol, DomainGuards) {
  EXPECT_THROW(sphere_symbol_oracle(OperatorKind::V, 11, 2.0), ContractError);
  EXPECT_THROW(sphere_symbol_oracle(OperatorKind::V, 0, 0.4), ContractError);
  EXPECT_THROW(sphere_symbol_oracle(OperatorKind::K, 0, 2.0), ContractError);
}

TEST(RobinOracle, DegreeZeroIsHalfPi) {
  const auto k = robin_wavenumber_oracle(0, 1.0);
  ASSERT_TRUE(k.has_value());
  EXPECT_NEAR(*k, std::numbers::pi / 2.0, 1e-10);
}

TEST(RobinOracle, DegreeOneNearDiscreteResonance) {
  const auto k = robin_wavenumber_oracle(1, 1.0);
  ASSERT_TRUE(k.has_value());
  EXPECT_NEAR(*k, 2.744, 1e-3);
  const double residual = std::sin(*k) * (*k * *k - 1.0) + *k * std::cos(*k);
  EXPECT_LT(std::abs(residual), 1e-9);
}

TEST(RobinOracle, RootsSatisfyTheRobinCondition) {
  for (int l = 0; l <= 6; ++l) {
    for (double beta : {0.1, 1.0, 3.0, 25.0}) {
      const auto k = robin_wavenumber_oracle(l, beta);
      ASSERT_TRUE(k.has_value()) << "l " << l << " beta " << beta;
      EXPECT_LT(std::abs(*k * spherical_bessel_j_derivative(l, *k) + beta * spherical_bessel_j(l, *k)), 1e-9);
    }
  }
}

TEST(RobinOracle, ComplexPenaltyHasNoRealEigenvalue) {
  EXPECT_FALSE(robin_wavenumber_oracle(1, Complex(1.0, -1.0)).has_value());
  EXPECT_FALSE(robin_wavenumber_oracle(0, Complex(1.0, 1e-3)).has_value());
}

TEST(RelativeError, InterpolatedLinearFieldsHaveZeroError) {
  const BoundaryFunction u = [](const Point& x, const Point&) { return Complex(x.x(), 2.0 * x.y()); };
  const BoundaryFunction l = [](const Point& x, const Point&) { return Complex(1.0 + x.z(), -x.x()); };
  const TraceSolution s = linear_traces(2, u, l);
  const ErrorMetric e = relative_error(s, u, l, s.beta);
  EXPECT_LT(e.rel_l2_u, 1e-14);
  EXPECT_LT(e.rel_l2_lambda, 1e-14);
  EXPECT_LT(e.penalty_l2_u, 1e-14);
  EXPECT_FALSE(e.zero_exact_norm);
}

TEST(RelativeError, ZeroSolutionHasUnitError) {
  const BoundaryFunction u = [](const Point& x, const Point& n) { return point_source_field(3.0, x) + n.x(); };
  const BoundaryFunction l = [](const Point& x, const Point& n) { return point_source_neumann_trace(3.0, x, n); };
  TraceSolution s = linear_traces(1, u, l);
  s.u.setZero();
  s.lambda.setZero();
  const ErrorMetric e = relative_error(s, u, l, Complex(4.0, 0.0));
  EXPECT_NEAR(e.rel_l2_u, 1.0, 1e-14);
  EXPECT_NEAR(e.rel_l2_lambda, 1.0, 1e-14);
  EXPECT_GT(e.penalty_l2_u, 0.0);
}

TEST(RelativeError, HomogeneousOfDegreeZero) {
  const BoundaryFunction u = [](const Point& x, const Point&) { return point_source_field(3.0, x); };
  const BoundaryFunction l = [](const Point& x, const Point& n) { return point_source_neumann_trace(3.0, x, n); };
  const TraceSolution s = linear_traces(2, u, l);
  const Complex scale(3.0, -2.0);
  TraceSolution scaled = s;
  scaled.u *= scale;
  scaled.lambda *= scale;
  const BoundaryFunction su = [&](const Point& x, const Point& n) { return scale * u(x, n); };
  const BoundaryFunction sl = [&](const Point& x, const Point& n) { return scale * l(x, n); };
  const ErrorMetric a = relative_error(s, u, l, s.beta);
  const ErrorMetric b = relative_error(scaled, su, sl, s.beta);
  EXPECT_GT(a.rel_l2_u, 0.0);
  EXPECT_NEAR(a.rel_l2_u, b.rel_l2_u, 1e-13);
  EXPECT_NEAR(a.rel_l2_lambda, b.rel_l2_lambda, 1e-13);
  EXPECT_NEAR(b.penalty_l2_u, std::abs(scale) * a.penalty_l2_u, 1e-12);
}

TEST(RelativeError, ZeroExactNormReturnsAbsoluteError) {
  const BoundaryFunction zero = [](const Point&, const Point&) { return Complex(0.0); };
  const BoundaryFunction one = [](const Point&, const Point&) { return Complex(1.0); };
  const TraceSolution s = linear_traces(1, one, one);
  const ErrorMetric e = relative_error(s, zero, one, Complex(1.0, 0.0));
  EXPECT_TRUE(e.zero_exact_norm);
  EXPECT_NEAR(e.rel_l2_u, std::sqrt(mesh_stats(s.space_u.mesh()).total_area), 1e-12);
  EXPECT_LT(e.rel_l2_lambda, 1e-14);
}
