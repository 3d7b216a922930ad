#include "weakbem/quadrature.hpp"

#include "weakbem/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace weakbem {

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) {
    throw ConfigError("Gauss-Legendre rule needs at least one point");
  }
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? x : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1], ascending order.
    nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
    weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
}

namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  // Barycentric orbit (a, a, 1 - 2a).
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({a, a});
  rule.points.push_back({b, a});
  rule.points.push_back({a, b});
  for (int i = 0; i < 3; ++i) {
    rule.weights.push_back(0.5 * w);
  }
}

TriangleRule collapsed_rule(int order) {
  const int n = (order + 3) / 2;
  std::vector<double> x;
  std::vector<double> wx;
  gauss_legendre_unit(n, x, wx);
  TriangleRule rule;
  rule.order = order;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = x[i];
      const double t = (1.0 - s) * x[j];
      rule.points.push_back({s, t});
      rule.weights.push_back(wx[i] * wx[j] * (1.0 - s));
    }
  }
  return rule;
}

}  // namespace

TriangleRule gauss_triangle(int order) {
  if (order < 1 || order > kMaxTriangleOrder) {
    throw ConfigError("unsupported triangle quadrature order " + std::to_string(order) +
                      " (supported: 1.." + std::to_string(kMaxTriangleOrder) + ")");
  }
  TriangleRule rule;
  rule.order = order;
  switch (order) {
    case 1:
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.5);
      return rule;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
      return rule;
    case 3:
    case 4:
      add_orbit3(rule, 0.44594849091596488632, 0.22338158967801146570);
      add_orbit3(rule, 0.09157621350977074346, 0.10995174365532186764);
      return rule;
    case 5: {
      const double r15 = std::sqrt(15.0);
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.5 * 9.0 / 40.0);
      add_orbit3(rule, (6.0 - r15) / 21.0, (155.0 - r15) / 1200.0);
      add_orbit3(rule, (6.0 + r15) / 21.0, (155.0 + r15) / 1200.0);
      return rule;
    }
    default:
      return collapsed_rule(order);
  }
}

PairRule tensor_rule(const TriangleRule& x_rule, const TriangleRule& y_rule) {
  PairRule rule;
  rule.tag = PairTag::disjoint;
  rule.points.reserve(x_rule.size() * y_rule.size());
  rule.weights.reserve(x_rule.size() * y_rule.size());
  for (std::size_t i = 0; i < x_rule.size(); ++i) {
    for (std::size_t j = 0; j < y_rule.size(); ++j) {
      const auto& px = x_rule.points[i];
      const auto& py = y_rule.points[j];
      rule.points.push_back({px[0], px[1], py[0], py[1]});
      rule.weights.push_back(x_rule.weights[i] * y_rule.weights[j]);
    }
  }
  return rule;
}

namespace {

// The transforms below are written on the simplex {0 <= x2 <= x1 <= 1}, whose
// vertices (0,0), (1,0), (1,1) correspond to local vertices 0, 1, 2. The
// reference coordinates are then s = x1 - x2, t = x2 (unit Jacobian).
struct SimplexPoint {
  double x1;
  double x2;
};

void push(PairRule& rule, SimplexPoint x, SimplexPoint y, double w) {
  rule.points.push_back({x.x1 - x.x2, x.x2, y.x1 - y.x2, y.x2});
  rule.weights.push_back(w);
}

}  // namespace

PairRule singular_rule(PairTag tag, int order) {
  if (tag == PairTag::disjoint) {
    throw ContractError("singular_rule called for a disjoint pair; use tensor_rule");
  }
  if (order < 2) {
    throw ContractError("singular quadrature order must be at least 2");
  }
  std::vector<double> g;
  std::vector<double> gw;
  gauss_legendre_unit(order, g, gw);

  PairRule rule;
  rule.tag = tag;
  const std::size_t n = g.size();
  const std::size_t regions = tag == PairTag::coincident ? 6 : tag == PairTag::edge_adjacent ? 5 : 2;
  rule.points.reserve(n * n * n * n * regions);
  rule.weights.reserve(n * n * n * n * regions);

  for (std::size_t a = 0; a < n; ++a) {
    const double xi = g[a];
    for (std::size_t b = 0; b < n; ++b) {
      const double e1 = g[b];
      for (std::size_t c = 0; c < n; ++c) {
        const double e2 = g[c];
        for (std::size_t d = 0; d < n; ++d) {
          const double e3 = g[d];
          const double w = gw[a] * gw[b] * gw[c] * gw[d];
          switch (tag) {
            case PairTag::coincident: {
              const double jac = w * xi * xi * xi * e1 * e1 * e2;
              const SimplexPoint p1{xi, xi * (1.0 - e1 + e1 * e2)};
              const SimplexPoint q1{xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)};
              const SimplexPoint p2{xi, xi * e1 * (1.0 - e2 + e2 * e3)};
              const SimplexPoint q2{xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)};
              const SimplexPoint p3{xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)};
              const SimplexPoint q3{xi, xi * e1 * (1.0 - e2)};
              push(rule, p1, q1, jac);
              push(rule, q1, p1, jac);
              push(rule, p2, q2, jac);
              push(rule, q2, p2, jac);
              push(rule, p3, q3, jac);
              push(rule, q3, p3, jac);
              break;
            }
            case PairTag::edge_adjacent: {
              const double jac = w * xi * xi * xi * e1 * e1;
              push(rule, {xi, xi * e1 * e3}, {xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)}, jac);
              push(rule, {xi, xi * e1}, {xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)},
                   jac * e2);
              push(rule, {xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)}, {xi, xi * e1 * e2 * e3},
                   jac * e2);
              push(rule, {xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)}, {xi, xi * e1},
                   jac * e2);
              push(rule, {xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)}, {xi, xi * e1 * e2},
                   jac * e2);
              break;
            }
            case PairTag::vertex_adjacent: {
              const double jac = w * xi * xi * xi * e2;
              push(rule, {xi, xi * e1}, {xi * e2, xi * e2 * e3}, jac);
              push(rule, {xi * e2, xi * e2 * e1}, {xi, xi * e3}, jac);
              break;
            }
            case PairTag::disjoint:
              break;
          }
        }
      }
    }
  }
  return rule;
}

}  // namespace weakbem
