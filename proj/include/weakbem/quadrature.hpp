#pragma once

#include "weakbem/mesh.hpp"

#include <array>
#include <vector>

namespace weakbem {

/// Quadrature on the reference triangle {(s, t) : s, t >= 0, s + t <= 1}.
///
/// A point (s, t) has barycentric coordinates (1 - s - t, s, t) with respect to
/// the triangle's local vertices 0, 1, 2. Weights are relative to the
/// reference measure, so they sum to 1/2.
struct TriangleRule {
  int order = 0;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Quadrature on a product of two reference triangles. Each point is
/// (s_x, t_x, s_y, t_y); weights sum to 1/4.
///
/// For the singular classes the rule assumes the shared vertices come first
/// in both triangles, in matching order: vertex 0 for vertex_adjacent,
/// vertices 0 and 1 for edge_adjacent, all three for coincident.
struct PairRule {
  PairTag tag = PairTag::disjoint;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

inline constexpr int kMaxTriangleOrder = 20;

/// n-point Gauss-Legendre rule on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Positive-weight rule exact for polynomials of total degree <= `order`.
/// Orders 1, 2, 4 and 5 use the classical symmetric rules; other orders use a
/// collapsed Gauss-Legendre product. Throws ConfigError outside [1, 20].
TriangleRule gauss_triangle(int order);

/// Tensor product of two triangle rules (x varies slowest).
PairRule tensor_rule(const TriangleRule& x_rule, const TriangleRule& y_rule);

/// Sauter-Schwab regularizing rule with `order` Gauss points per direction of
/// the four-dimensional parameter cube. Throws ContractError for the disjoint
/// class or order < 2.
PairRule singular_rule(PairTag tag, int order);

}  // namespace weakbem
