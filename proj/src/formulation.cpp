#include "weakbem/formulation.hpp"

#include "weakbem/error.hpp"
#include "weakbem/quadrature.hpp"

#include <array>

namespace weakbem {

std::shared_ptr<const CalderonOperators> assemble_calderon(const DofSpace& space_u, const DofSpace& space_lambda,
                                                           Wavenumber k, const QuadratureConfig& quad, int threads) {
  if (!space_u.same_mesh(space_lambda)) {
    throw ContractError("u and lambda spaces must live on the same mesh");
  }
  const std::array<OperatorRequest, 4> requests{{
      {OperatorKind::V, &space_lambda, &space_lambda},
      {OperatorKind::K, &space_u, &space_lambda},
      {OperatorKind::Kadj, &space_lambda, &space_u},
      {OperatorKind::W, &space_u, &space_u},
  }};
  auto mats = assemble_boundary_operators(requests, k, quad, threads);
  auto ops = std::make_shared<CalderonOperators>(CalderonOperators{
      space_u,
      space_lambda,
      k.value(),
      std::move(mats[0].entries),
      std::move(mats[1].entries),
      std::move(mats[2].entries),
      std::move(mats[3].entries),
      assemble_mass(space_u, space_u).entries,
      assemble_mass(space_lambda, space_lambda).entries,
      assemble_mass(space_lambda, space_u).entries,
  });
  return ops;
}

BlockedDirichletSystem build_dirichlet_system(std::shared_ptr<const CalderonOperators> operators,
                                              const PenaltyParameter& penalty, const BoundaryFunction& g_dirichlet,
                                              const SystemOptions& options) {
  if (!operators) {
    throw ContractError("build_dirichlet_system requires assembled operators");
  }
  const CalderonOperators& ops = *operators;
  const Complex beta = penalty.effective(ops.space_u.mesh().h_max());
  if (options.enforce_positive_real_penalty && !(beta.real() > 0.0)) {
    throw HypothesisError("the penalty parameter must have positive real part, got (" +
                          std::to_string(beta.real()) + ", " + std::to_string(beta.imag()) + ")");
  }

  const SparseComplex m_uu = ops.mass_uu.cast<Complex>();
  const SparseComplex m_ul = ops.mass_ul.cast<Complex>();
  const SparseComplex m_lu = SparseComplex(m_ul.transpose());

  // Aliasing pointers keep the operator bundle alive for the block operator.
  auto alias = [&operators](const Eigen::MatrixXcd& m) {
    return std::shared_ptr<const Eigen::MatrixXcd>(operators, &m);
  };
  std::array<std::array<BlockTerm, 2>, 2> blocks;
  blocks[0][0] = {alias(ops.double_layer), -1.0, -0.5 * m_lu};
  blocks[0][1] = {alias(ops.single_layer), 1.0, SparseComplex()};
  blocks[1][0] = {alias(ops.hypersingular), 1.0, beta * m_uu};
  blocks[1][1] = {alias(ops.adjoint_double_layer), 1.0, 0.5 * m_ul};

  const auto nu = static_cast<Eigen::Index>(ops.space_u.dof_count());
  const auto nl = static_cast<Eigen::Index>(ops.space_lambda.dof_count());
  BlockOperator op({nl, nu}, {nu, nl}, std::move(blocks));

  ComplexVector rhs(nu + nl);
  rhs.head(nl) = -project_onto_basis(ops.space_lambda, g_dirichlet, options.rhs_quadrature_order);
  rhs.tail(nu) = beta * project_onto_basis(ops.space_u, g_dirichlet, options.rhs_quadrature_order);

  return {std::move(operators), penalty, beta, std::move(op), std::move(rhs)};
}

BlockedDirichletSystem build_dirichlet_system(const DofSpace& space_u, const DofSpace& space_lambda, Wavenumber k,
                                              const PenaltyParameter& penalty, const BoundaryFunction& g_dirichlet,
                                              const QuadratureConfig& quad, int threads,
                                              const SystemOptions& options) {
  const Complex beta = penalty.effective(space_u.mesh().h_max());
  if (options.enforce_positive_real_penalty && !(beta.real() > 0.0)) {
    throw HypothesisError("the penalty parameter must have positive real part");
  }
  return build_dirichlet_system(assemble_calderon(space_u, space_lambda, k, quad, threads), penalty, g_dirichlet,
                                options);
}

DirichletSolve solve_dirichlet(const BlockedDirichletSystem& system, double tol, int maxiter) {
  const CalderonOperators& ops = *system.operators;
  const MassPreconditioner preconditioner(ops.mass_ll, ops.mass_uu);
  GmresResult result = gmres_solve(system.op, system.rhs, preconditioner, tol, maxiter);
  const auto nu = static_cast<Eigen::Index>(ops.space_u.dof_count());
  const auto nl = static_cast<Eigen::Index>(ops.space_lambda.dof_count());
  TraceSolution solution{ops.space_u, ops.space_lambda, result.x.head(nu), result.x.tail(nl), ops.wavenumber,
                         system.beta};
  return {std::move(solution), std::move(result.report)};
}

ComplexVector system_residual(const BlockedDirichletSystem& system, const ComplexVector& u,
                              const ComplexVector& lambda) {
  ComplexVector x(u.size() + lambda.size());
  x << u, lambda;
  return system.op.apply(x) - system.rhs;
}

double calderon_identity_residual(const CalderonOperators& ops, const ComplexVector& u,
                                  const ComplexVector& lambda) {
  const SparseComplex m_ul = ops.mass_ul.cast<Complex>();
  const SparseComplex m_lu = SparseComplex(m_ul.transpose());
  // Rows tested with v: <W u, v> + <K' lambda, v>;  rows tested with mu:
  // -<K u, mu> + <V lambda, mu>.
  const ComplexVector mass_v = 0.5 * (m_ul * lambda);
  const ComplexVector mass_mu = 0.5 * (m_lu * u);
  const ComplexVector res_v = ops.hypersingular * u + ops.adjoint_double_layer * lambda + mass_v;
  const ComplexVector res_mu = -(ops.double_layer * u) + ops.single_layer * lambda + mass_mu;
  const double num = std::sqrt(res_v.squaredNorm() + res_mu.squaredNorm());
  const double den = std::sqrt(mass_v.squaredNorm() + mass_mu.squaredNorm());
  return den == 0.0 ? num : num / den;
}

std::vector<FieldValue> evaluate_representation(const TraceSolution& solution, std::span<const Point> points,
                                                int quadrature_order) {
  const Mesh& mesh = solution.space_u.mesh();
  const TriangleRule rule = gauss_triangle(quadrature_order);
  const double k = solution.wavenumber;

  struct Sample {
    Point y;
    Point normal;
    double weight;
    Complex u;
    Complex lambda;
  };
  std::vector<Sample> samples;
  samples.reserve(mesh.triangle_count() * rule.size());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    const double jac = 2.0 * mesh.areas()[t];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [s, r] = rule.points[q];
      const std::array<double, 3> bary{1.0 - s - r, s, r};
      samples.push_back({bary[0] * c[0] + bary[1] * c[1] + bary[2] * c[2], mesh.normals()[t],
                         rule.weights[q] * jac, evaluate(solution.space_u, solution.u, t, bary),
                         evaluate(solution.space_lambda, solution.lambda, t, bary)});
    }
  }

  std::vector<FieldValue> values;
  values.reserve(points.size());
  for (const Point& x : points) {
    FieldValue fv{Complex(0.0), false};
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      if ((x - mesh.centroids()[t]).norm() < 2.0 * mesh.diameters()[t]) {
        fv.near_surface = true;
        break;
      }
    }
    for (const Sample& s : samples) {
      fv.value += s.weight * (green_normal_derivative(k, x, s.y, s.normal) * s.u - green_kernel(k, x, s.y) * s.lambda);
    }
    values.push_back(fv);
  }
  return values;
}

}  // namespace weakbem
