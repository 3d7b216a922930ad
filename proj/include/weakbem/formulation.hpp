#pragma once

#include "weakbem/kernel.hpp"
#include "weakbem/operators.hpp"
#include "weakbem/solver.hpp"
#include "weakbem/spaces.hpp"

#include <memory>
#include <span>
#include <vector>

namespace weakbem {

enum class PenaltyScaling { constant, inverse_h };

/// Penalty weight beta_D of the weak Dirichlet form.
struct PenaltyParameter {
  Complex beta{1.0, -1.0};
  PenaltyScaling scaling = PenaltyScaling::constant;

  /// beta, or beta / h_max for inverse_h scaling.
  Complex effective(double h_max) const {
    return scaling == PenaltyScaling::inverse_h ? beta / h_max : beta;
  }
};

/// Galerkin matrices of V, K, K', W and the mass matrices for one (mesh,
/// product space, wavenumber). Independent of the penalty, so one assembly
/// serves any number of penalty values.
struct CalderonOperators {
  DofSpace space_u;
  DofSpace space_lambda;
  double wavenumber;
  Eigen::MatrixXcd single_layer;          // test lambda-space, trial lambda-space
  Eigen::MatrixXcd double_layer;          // test lambda-space, trial u-space
  Eigen::MatrixXcd adjoint_double_layer;  // test u-space, trial lambda-space
  Eigen::MatrixXcd hypersingular;         // test u-space, trial u-space
  Eigen::SparseMatrix<double> mass_uu;
  Eigen::SparseMatrix<double> mass_ll;
  Eigen::SparseMatrix<double> mass_ul;  // test u-space, trial lambda-space
};

std::shared_ptr<const CalderonOperators> assemble_calderon(const DofSpace& space_u, const DofSpace& space_lambda,
                                                           Wavenumber k, const QuadratureConfig& quad = {},
                                                           int threads = 1);

/// The discrete system (A + B_D)(u, lambda) = L_D.
///
/// Block columns hold (u, lambda); the first block row is tested with mu, the
/// second with v:
///   [ -K - 1/2 M_lu        V             ] [u     ]   [ -(g, mu)    ]
///   [ W + beta M_uu        K' + 1/2 M_ul ] [lambda] = [ beta (g, v) ]
/// This row order makes the mass-preconditioned matrix the discrete strong
/// form of the Calderon multitrace operator, whose square is close to a
/// multiple of the identity. Basis functions are real, so the sesquilinear
/// pairing contributes no conjugation to the matrix; conj(conj(beta)) = beta
/// on the right-hand side.
struct BlockedDirichletSystem {
  std::shared_ptr<const CalderonOperators> operators;
  PenaltyParameter penalty;
  Complex beta;  // effective value after scaling
  BlockOperator op;
  ComplexVector rhs;

  const DofSpace& space_u() const { return operators->space_u; }
  const DofSpace& space_lambda() const { return operators->space_lambda; }
};

struct SystemOptions {
  /// Reject Re(beta) <= 0. Disable only for validation of the bare forms.
  bool enforce_positive_real_penalty = true;
  int rhs_quadrature_order = 6;
};

BlockedDirichletSystem build_dirichlet_system(std::shared_ptr<const CalderonOperators> operators,
                                              const PenaltyParameter& penalty, const BoundaryFunction& g_dirichlet,
                                              const SystemOptions& options = {});

BlockedDirichletSystem build_dirichlet_system(const DofSpace& space_u, const DofSpace& space_lambda, Wavenumber k,
                                              const PenaltyParameter& penalty, const BoundaryFunction& g_dirichlet,
                                              const QuadratureConfig& quad = {}, int threads = 1,
                                              const SystemOptions& options = {});

/// Coefficients of the Dirichlet trace u and the flux lambda.
struct TraceSolution {
  DofSpace space_u;
  DofSpace space_lambda;
  ComplexVector u;
  ComplexVector lambda;
  double wavenumber;
  Complex beta;
};

struct DirichletSolve {
  TraceSolution solution;
  SolveReport report;
};

/// Left mass-preconditioned GMRES on the blocked system.
DirichletSolve solve_dirichlet(const BlockedDirichletSystem& system, double tol = 1e-5, int maxiter = 1000);

/// Residual of the blocked system for given coefficients, in the Euclidean
/// norm of the test-function coefficients.
ComplexVector system_residual(const BlockedDirichletSystem& system, const ComplexVector& u,
                              const ComplexVector& lambda);

/// Residual of the multitrace identity A[(u,l),(v,mu)] + 1/2 (u,mu) + 1/2 (l,v)
/// over all basis test pairs, divided by the norm of the mass terms.
double calderon_identity_residual(const CalderonOperators& operators, const ComplexVector& u,
                                  const ComplexVector& lambda);

struct FieldValue {
  Complex value;
  /// Point lies within two element diameters of some triangle centroid, where
  /// the regular quadrature loses accuracy.
  bool near_surface = false;
};

/// Exterior field K u_h - V lambda_h by regular quadrature.
std::vector<FieldValue> evaluate_representation(const TraceSolution& solution, std::span<const Point> points,
                                                int quadrature_order = 6);

}  // namespace weakbem
