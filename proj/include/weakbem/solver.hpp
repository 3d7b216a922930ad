#pragma once

#include "weakbem/kernel.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace weakbem {

using ComplexVector = Eigen::VectorXcd;
using SparseComplex = Eigen::SparseMatrix<Complex>;

/// One block of a 2x2 operator: scale * dense + sparse. Either part may be
/// absent.
struct BlockTerm {
  std::shared_ptr<const Eigen::MatrixXcd> dense;
  Complex dense_scale = 1.0;
  SparseComplex sparse;
};

/// 2x2 block operator acting on (u, lambda) coefficient vectors.
class BlockOperator {
public:
  /// `row_sizes` are the test dof counts of the two block rows, `col_sizes`
  /// the trial dof counts of the two block columns. Blocks are indexed
  /// [row][col]; throws ContractError on inconsistent dimensions.
  BlockOperator(std::array<Eigen::Index, 2> row_sizes, std::array<Eigen::Index, 2> col_sizes,
                std::array<std::array<BlockTerm, 2>, 2> blocks);

  Eigen::Index rows() const noexcept { return row_sizes_[0] + row_sizes_[1]; }
  Eigen::Index cols() const noexcept { return col_sizes_[0] + col_sizes_[1]; }
  const std::array<Eigen::Index, 2>& row_sizes() const noexcept { return row_sizes_; }
  const std::array<Eigen::Index, 2>& col_sizes() const noexcept { return col_sizes_; }
  const BlockTerm& block(int row, int col) const { return blocks_[row][col]; }

  ComplexVector apply(const ComplexVector& x) const;
  Eigen::MatrixXcd to_dense() const;

private:
  std::array<Eigen::Index, 2> row_sizes_;
  std::array<Eigen::Index, 2> col_sizes_;
  std::array<std::array<BlockTerm, 2>, 2> blocks_;
};

/// Block-diagonal inverse of two symmetric positive definite mass matrices, one
/// per block row,
/// factorized once with a sparse Cholesky decomposition.
class MassPreconditioner {
public:
  /// Throws FactorizationError when a matrix is not square, not symmetric or
  /// not positive definite.
  MassPreconditioner(const Eigen::SparseMatrix<double>& mass_first, const Eigen::SparseMatrix<double>& mass_second);

  Eigen::Index size_first() const noexcept { return size_first_; }
  Eigen::Index size_second() const noexcept { return size_second_; }

  ComplexVector apply(const ComplexVector& r) const;

private:
  using Factorization = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
  // Factorizations are held by pointer: Eigen's solvers are not copyable.
  std::shared_ptr<Factorization> factor_first_;
  std::shared_ptr<Factorization> factor_second_;
  Eigen::Index size_first_ = 0;
  Eigen::Index size_second_ = 0;
};

MassPreconditioner build_preconditioner(const Eigen::SparseMatrix<double>& mass_first,
                                        const Eigen::SparseMatrix<double>& mass_second);

struct SolveReport {
  int iterations = 0;
  /// Preconditioned relative residual after 0, 1, ..., iterations steps.
  std::vector<double> residual_history;
  bool converged = false;
  double wall_time = 0.0;

  double achieved_tolerance() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

struct GmresResult {
  ComplexVector x;
  SolveReport report;
};

using LinearMap = std::function<ComplexVector(const ComplexVector&)>;

/// Full (non-restarted) GMRES for P A x = P b with zero initial guess. Stops
/// once the preconditioned relative residual |P(b - A x)| / |P b| <= tol.
/// Reaching `maxiter` is reported through `converged = false`. An empty
/// preconditioner stands for the identity.
GmresResult gmres(const LinearMap& apply_operator, const LinearMap& apply_preconditioner, const ComplexVector& b,
                  double tol, int maxiter);

GmresResult gmres_solve(const BlockOperator& A, const ComplexVector& b, const MassPreconditioner& P, double tol,
                        int maxiter = 1000);

}  // namespace weakbem
