#include "weakbem/analytic.hpp"
#include "weakbem/error.hpp"
#include "weakbem/formulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

using namespace weakbem;

namespace {

constexpr double kWave = 3.0;

BoundaryFunction exact_u(double k) {
  return [k](const Point& x, const Point&) { return point_source_field(k, x); };
}

BoundaryFunction exact_lambda(double k) {
  return [k](const Point& x, const Point& n) { return point_source_neumann_trace(k, x, n); };
}

std::shared_ptr<const Mesh> sphere(int level) { return std::make_shared<const Mesh>(build_icosphere(level)); }

// Operators are shared between tests; assembly dominates the runtime.
std::shared_ptr<const CalderonOperators> operators(int level, double k, SpaceKind lambda_kind = SpaceKind::P1) {
  static std::map<std::tuple<int, double, SpaceKind>, std::shared_ptr<const CalderonOperators>> cache;
  static std::map<int, std::shared_ptr<const Mesh>> meshes;
  auto& ops = cache[{level, k, lambda_kind}];
  if (!ops) {
    auto& mesh = meshes[level];
    if (!mesh) {
      mesh = sphere(level);
    }
    ops = assemble_calderon(DofSpace(mesh, SpaceKind::P1), DofSpace(mesh, lambda_kind), Wavenumber(k));
  }
  return ops;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Penalty, InverseScalingDividesByMeshSize) {
  const PenaltyParameter p{Complex(2.0, -1.0), PenaltyScaling::inverse_h};
  EXPECT_EQ(p.effective(0.5), Complex(4.0, -2.0));
  const PenaltyParameter c{Complex(2.0, -1.0), PenaltyScaling::constant};
  EXPECT_EQ(c.effective(0.5), Complex(2.0, -1.0));
  for (int level : {1, 2, 3}) {
    const double h = build_icosphere(level).h_max();
    EXPECT_NEAR(std::abs(p.effective(h)) * h, std::abs(p.beta), 1e-14);
  }
}

TEST(DirichletSystem, NonPositivePenaltyViolatesHypothesis) {
  const auto ops = operators(1, kWave);
  EXPECT_THROW(build_dirichlet_system(ops, {Complex(0.0, 1.0)}, exact_u(kWave)), HypothesisError);
  EXPECT_THROW(build_dirichlet_system(ops, {Complex(-1.0, 0.0)}, exact_u(kWave)), HypothesisError);
  const auto mesh = sphere(0);
  EXPECT_THROW(build_dirichlet_system(DofSpace(mesh, SpaceKind::P1), DofSpace(mesh, SpaceKind::P1), Wavenumber(1.0),
                                      {Complex(0.0, 0.0)}, exact_u(1.0)),
               HypothesisError);
}

TEST(DirichletSystem, BlocksCarryTheCalderonAndPenaltyTerms) {
  const auto ops = operators(1, kWave);
  const Complex beta(1.0, -1.0);
  const auto system = build_dirichlet_system(ops, {beta}, exact_u(kWave));
  const Eigen::MatrixXcd a = system.op.to_dense();
  const auto nu = static_cast<Eigen::Index>(ops->space_u.dof_count());
  const auto nl = static_cast<Eigen::Index>(ops->space_lambda.dof_count());
  const Eigen::MatrixXcd m_uu = Eigen::MatrixXd(ops->mass_uu).cast<Complex>();
  const Eigen::MatrixXcd m_ul = Eigen::MatrixXd(ops->mass_ul).cast<Complex>();
  // Rows tested with mu come first, rows tested with v second; columns (u, lambda).
  EXPECT_LT(max_abs(a.topLeftCorner(nl, nu) - (-ops->double_layer - 0.5 * m_ul.transpose())), 1e-15);
  EXPECT_LT(max_abs(a.topRightCorner(nl, nl) - ops->single_layer), 1e-15);
  EXPECT_LT(max_abs(a.bottomLeftCorner(nu, nu) - (ops->hypersingular + beta * m_uu)), 1e-15);
  EXPECT_LT(max_abs(a.bottomRightCorner(nu, nl) - (ops->adjoint_double_layer + 0.5 * m_ul)), 1e-15);
  EXPECT_EQ(system.beta, beta);
}

TEST(DirichletSystem, ZeroPenaltyLeavesOnlyPairingTerms) {
  const auto ops = operators(1, kWave);
  SystemOptions options;
  options.enforce_positive_real_penalty = false;
  const auto zero = build_dirichlet_system(ops, {Complex(0.0)}, exact_u(kWave), options);
  const auto nu = static_cast<Eigen::Index>(ops->space_u.dof_count());
  const Eigen::MatrixXcd a = zero.op.to_dense();
  EXPECT_LT(max_abs(a.bottomLeftCorner(nu, nu) - ops->hypersingular), 1e-15);
  EXPECT_EQ(zero.rhs.tail(nu).norm(), 0.0);
}

TEST(DirichletSystem, RightHandSideIsLinearInData) {
  const auto ops = operators(1, kWave);
  const auto zero = build_dirichlet_system(ops, {Complex(1.0, -1.0)},
                                           [](const Point&, const Point&) { return Complex(0.0); });
  EXPECT_EQ(zero.rhs.norm(), 0.0);
  const auto g = exact_u(kWave);
  const auto base = build_dirichlet_system(ops, {Complex(1.0, -1.0)}, g);
  const auto rotated = build_dirichlet_system(
      ops, {Complex(1.0, -1.0)}, [&](const Point& x, const Point& n) { return Complex(0.0, 1.0) * g(x, n); });
  EXPECT_LT((rotated.rhs - Complex(0.0, 1.0) * base.rhs).norm(), 1e-14 * base.rhs.norm());
}

TEST(DirichletSystem, ConjugatedPenaltyAndDataConjugateThePenaltyTerms) {
  // Boundary integral blocks depend on k only; the penalty enters
  // holomorphically and no conjugation is applied to the data.
  const auto ops = operators(1, kWave);
  const Complex beta(2.0, -0.7);
  const auto g = exact_u(kWave);
  const auto a = build_dirichlet_system(ops, {beta}, g);
  const auto b = build_dirichlet_system(ops, {std::conj(beta)},
                                        [&](const Point& x, const Point& n) { return std::conj(g(x, n)); });
  EXPECT_LT((b.rhs - a.rhs.conjugate()).norm(), 1e-14 * a.rhs.norm());
  const auto nu = static_cast<Eigen::Index>(ops->space_u.dof_count());
  const auto nl = static_cast<Eigen::Index>(ops->space_lambda.dof_count());
  const Eigen::MatrixXcd diff = b.op.to_dense() - a.op.to_dense();
  const Eigen::MatrixXcd m_uu = Eigen::MatrixXd(ops->mass_uu).cast<Complex>();
  EXPECT_LT(max_abs(diff.bottomLeftCorner(nu, nu) - (std::conj(beta) - beta) * m_uu), 1e-14);
  EXPECT_EQ(max_abs(diff.topRows(nl)), 0.0);
  EXPECT_EQ(max_abs(diff.bottomRightCorner(nu, nl)), 0.0);
}

TEST(DirichletSystem, InterpolatedExactTracesHaveDecreasingResidual) {
  double previous = std::numeric_limits<double>::infinity();
  for (int level : {1, 2, 3}) {
    const auto ops = operators(level, kWave);
    const auto system = build_dirichlet_system(ops, {Complex(1.0, -1.0)}, exact_u(kWave));
    const ComplexVector u = interpolate(ops->space_u, exact_u(kWave));
    const ComplexVector l = interpolate(ops->space_lambda, exact_lambda(kWave));
    const double residual = system_residual(system, u, l).norm() / system.rhs.norm();
    EXPECT_LT(residual, previous) << "level " << level;
    previous = residual;
  }
}

TEST(CalderonIdentity, ResidualDecreasesUnderRefinement) {
  double previous = std::numeric_limits<double>::infinity();
  for (int level : {1, 2, 3}) {
    const auto ops = operators(level, kWave);
    const double r = calderon_identity_residual(*ops, interpolate(ops->space_u, exact_u(kWave)),
                                                interpolate(ops->space_lambda, exact_lambda(kWave)));
    EXPECT_LT(r, previous) << "level " << level;
    previous = r;
  }
}

TEST(SolveDirichlet, ZeroDataGivesZeroSolution) {
  const auto ops = operators(1, kWave);
  const auto system = build_dirichlet_system(ops, {Complex(1.0, -1.0)},
                                             [](const Point&, const Point&) { return Complex(0.0); });
  const DirichletSolve s = solve_dirichlet(system);
  EXPECT_TRUE(s.report.converged);
  EXPECT_EQ(s.solution.u.norm(), 0.0);
  EXPECT_EQ(s.solution.lambda.norm(), 0.0);
}

TEST(SolveDirichlet, QuarterSizeSphereAccuracyAndIterations) {
  const int level = icosphere_level_for_h(0.25);
  const auto ops = operators(level, kWave);
  const PenaltyParameter beta{Complex(1.0, -1.0)};
  const auto system = build_dirichlet_system(ops, beta, exact_u(kWave));
  const double tol = 1e-5;
  const DirichletSolve s = solve_dirichlet(system, tol);
  ASSERT_TRUE(s.report.converged);
  EXPECT_LE(s.report.iterations, 50);
  EXPECT_EQ(s.solution.u.size(), static_cast<Eigen::Index>(ops->space_u.dof_count()));
  EXPECT_EQ(s.solution.lambda.size(), static_cast<Eigen::Index>(ops->space_lambda.dof_count()));
  const ErrorMetric e = relative_error(s.solution, exact_u(kWave), exact_lambda(kWave), system.beta);
  EXPECT_GT(e.rel_l2_lambda, 1e-3);
  EXPECT_LT(e.rel_l2_lambda, 5e-2);
  EXPECT_LT(e.rel_l2_u, 5e-2);
  // Unpreconditioned residual stays within a small multiple of the tolerance.
  EXPECT_LE(system_residual(system, s.solution.u, s.solution.lambda).norm() / system.rhs.norm(), 10.0 * tol);
}

TEST(SolveDirichlet, RealPenaltyAwayFromResonanceConverges) {
  const int level = icosphere_level_for_h(0.25);
  const auto ops = operators(level, 2.0);
  const auto system = build_dirichlet_system(ops, {Complex(1.0, 0.0)}, exact_u(2.0));
  const DirichletSolve s = solve_dirichlet(system);
  EXPECT_TRUE(s.report.converged);
  EXPECT_LE(s.report.iterations, 50);
}

TEST(SolveDirichlet, PiecewiseConstantFluxSpace) {
  const auto ops = operators(2, kWave, SpaceKind::DP0);
  const auto system = build_dirichlet_system(ops, {Complex(1.0, -1.0)}, exact_u(kWave));
  const DirichletSolve s = solve_dirichlet(system);
  ASSERT_TRUE(s.report.converged);
  const ErrorMetric e = relative_error(s.solution, exact_u(kWave), exact_lambda(kWave), system.beta);
  EXPECT_LT(e.rel_l2_lambda, 0.2);
}

TEST(SolveDirichlet, IterationCountInsensitiveToDofOrdering) {
  const Mesh base = build_icosphere(2);
  std::vector<int> perm(base.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(17));
  std::vector<Point> vertices(base.vertex_count());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    vertices[static_cast<std::size_t>(perm[i])] = base.vertices()[i];
  }
  std::vector<Triangle> triangles;
  for (auto it = base.triangles().rbegin(); it != base.triangles().rend(); ++it) {
    triangles.push_back({perm[(*it)[1]], perm[(*it)[2]], perm[(*it)[0]]});
  }
  const auto shuffled = std::make_shared<const Mesh>(Mesh(vertices, triangles));
  const PenaltyParameter beta{Complex(1.0, -1.0)};
  const auto a = solve_dirichlet(build_dirichlet_system(operators(2, kWave), beta, exact_u(kWave)));
  const auto b = solve_dirichlet(build_dirichlet_system(DofSpace(shuffled, SpaceKind::P1),
                                                        DofSpace(shuffled, SpaceKind::P1), Wavenumber(kWave), beta,
                                                        exact_u(kWave)));
  EXPECT_LE(std::abs(a.report.iterations - b.report.iterations), 2);
  const double ea = relative_error(a.solution, exact_u(kWave), exact_lambda(kWave), a.solution.beta).rel_l2_lambda;
  const double eb = relative_error(b.solution, exact_u(kWave), exact_lambda(kWave), b.solution.beta).rel_l2_lambda;
  EXPECT_NEAR(ea, eb, 1e-3 * ea);
}

TEST(Representation, ZeroTracesGiveZeroField) {
  const auto ops = operators(1, kWave);
  const TraceSolution zero{ops->space_u, ops->space_lambda, ComplexVector::Zero(ops->space_u.dof_count()),
                           ComplexVector::Zero(ops->space_lambda.dof_count()), kWave, Complex(1.0, -1.0)};
  const std::vector<Point> points{{3, 0, 0}, {0, -3, 1}};
  for (const FieldValue& v : evaluate_representation(zero, points)) {
    EXPECT_EQ(v.value, Complex(0.0));
    EXPECT_FALSE(v.near_surface);
  }
}

TEST(Representation, InterpolatedTracesReproduceFieldAndExtinguishInside) {
  double previous_out = std::numeric_limits<double>::infinity();
  double previous_in = std::numeric_limits<double>::infinity();
  const Point outside{2, 0, 0};
  const Point inside{0, 0, 0};
  for (int level : {1, 2, 3}) {
    const auto ops = operators(level, kWave);
    const TraceSolution traces{ops->space_u, ops->space_lambda, interpolate(ops->space_u, exact_u(kWave)),
                               interpolate(ops->space_lambda, exact_lambda(kWave)), kWave, Complex(1.0, -1.0)};
    const std::vector<Point> points{outside, inside};
    const auto values = evaluate_representation(traces, points);
    const Complex exact = point_source_field(kWave, outside);
    const double err_out = std::abs(values[0].value - exact) / std::abs(exact);
    const double err_in = std::abs(values[1].value) / std::abs(exact);
    EXPECT_LT(err_out, previous_out);
    EXPECT_LT(err_in, previous_in);
    previous_out = err_out;
    previous_in = err_in;
  }
  EXPECT_LT(previous_out, 1e-2);
  EXPECT_LT(previous_in, 1e-2);
}

TEST(Representation, FlagsPointsCloseToTheSurface) {
  const auto ops = operators(1, kWave);
  const TraceSolution traces{ops->space_u, ops->space_lambda, interpolate(ops->space_u, exact_u(kWave)),
                             interpolate(ops->space_lambda, exact_lambda(kWave)), kWave, Complex(1.0, -1.0)};
  const std::vector<Point> points{{1.05, 0, 0}, {4, 0, 0}};
  const auto values = evaluate_representation(traces, points);
  EXPECT_TRUE(values[0].near_surface);
  EXPECT_FALSE(values[1].near_surface);
}
