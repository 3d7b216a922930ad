#include "weakbem/solver.hpp"

#include "weakbem/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace weakbem {

BlockOperator::BlockOperator(std::array<Eigen::Index, 2> row_sizes, std::array<Eigen::Index, 2> col_sizes,
                             std::array<std::array<BlockTerm, 2>, 2> blocks)
    : row_sizes_(row_sizes), col_sizes_(col_sizes), blocks_(std::move(blocks)) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const BlockTerm& term = blocks_[r][c];
      if (term.dense && (term.dense->rows() != row_sizes_[r] || term.dense->cols() != col_sizes_[c])) {
        throw ContractError("dense block (" + std::to_string(r) + "," + std::to_string(c) +
                            ") has inconsistent dimensions");
      }
      if (term.sparse.size() > 0 && (term.sparse.rows() != row_sizes_[r] || term.sparse.cols() != col_sizes_[c])) {
        throw ContractError("sparse block (" + std::to_string(r) + "," + std::to_string(c) +
                            ") has inconsistent dimensions");
      }
    }
  }
}

ComplexVector BlockOperator::apply(const ComplexVector& x) const {
  if (x.size() != cols()) {
    throw ContractError("block operator applied to a vector of the wrong length");
  }
  ComplexVector y = ComplexVector::Zero(rows());
  const std::array<Eigen::Index, 2> row_offset{0, row_sizes_[0]};
  const std::array<Eigen::Index, 2> col_offset{0, col_sizes_[0]};
  for (int r = 0; r < 2; ++r) {
    auto out = y.segment(row_offset[r], row_sizes_[r]);
    for (int c = 0; c < 2; ++c) {
      const BlockTerm& term = blocks_[r][c];
      const auto in = x.segment(col_offset[c], col_sizes_[c]);
      if (term.dense) {
        out.noalias() += term.dense_scale * (*term.dense * in);
      }
      if (term.sparse.size() > 0) {
        out += term.sparse * in;
      }
    }
  }
  return y;
}

Eigen::MatrixXcd BlockOperator::to_dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows(), cols());
  const std::array<Eigen::Index, 2> row_offset{0, row_sizes_[0]};
  const std::array<Eigen::Index, 2> col_offset{0, col_sizes_[0]};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const BlockTerm& term = blocks_[r][c];
      auto out_block = out.block(row_offset[r], col_offset[c], row_sizes_[r], col_sizes_[c]);
      if (term.dense) {
        out_block += term.dense_scale * *term.dense;
      }
      if (term.sparse.size() > 0) {
        out_block += Eigen::MatrixXcd(term.sparse);
      }
    }
  }
  return out;
}

namespace {

std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> factorize(const Eigen::SparseMatrix<double>& m,
                                                                             const char* name) {
  if (m.rows() != m.cols()) {
    throw FactorizationError(std::string(name) + " mass matrix is not square");
  }
  const Eigen::SparseMatrix<double> transpose = m.transpose();
  const double asym = (m - transpose).norm();
  if (asym > 1e-12 * m.norm()) {
    throw FactorizationError(std::string(name) + " mass matrix is not symmetric");
  }
  auto factor = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(m);
  if (factor->info() != Eigen::Success) {
    throw FactorizationError(std::string(name) + " mass matrix is not positive definite");
  }
  return factor;
}

}  // namespace

MassPreconditioner::MassPreconditioner(const Eigen::SparseMatrix<double>& mass_first,
                                       const Eigen::SparseMatrix<double>& mass_second)
    : factor_first_(factorize(mass_first, "first block")),
      factor_second_(factorize(mass_second, "second block")),
      size_first_(mass_first.rows()),
      size_second_(mass_second.rows()) {}

ComplexVector MassPreconditioner::apply(const ComplexVector& r) const {
  if (r.size() != size_first_ + size_second_) {
    throw ContractError("preconditioner applied to a vector of the wrong length");
  }
  ComplexVector out(r.size());
  auto solve_block = [&](const Factorization& factor, Eigen::Index offset, Eigen::Index n) {
    Eigen::MatrixXd rhs(n, 2);
    rhs.col(0) = r.segment(offset, n).real();
    rhs.col(1) = r.segment(offset, n).imag();
    const Eigen::MatrixXd sol = factor.solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) {
      out[offset + i] = Complex(sol(i, 0), sol(i, 1));
    }
  };
  solve_block(*factor_first_, 0, size_first_);
  solve_block(*factor_second_, size_first_, size_second_);
  return out;
}

MassPreconditioner build_preconditioner(const Eigen::SparseMatrix<double>& mass_first,
                                        const Eigen::SparseMatrix<double>& mass_second) {
  return MassPreconditioner(mass_first, mass_second);
}

GmresResult gmres(const LinearMap& apply_operator, const LinearMap& apply_preconditioner, const ComplexVector& b,
                  double tol, int maxiter) {
  if (!(tol > 0.0)) {
    throw ContractError("GMRES tolerance must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = b.size();
  GmresResult result{ComplexVector::Zero(n), {}};
  SolveReport& report = result.report;

  const auto precondition = [&](const ComplexVector& v) -> ComplexVector {
    return apply_preconditioner ? apply_preconditioner(v) : v;
  };
  const ComplexVector r0 = precondition(b);
  const double beta = r0.norm();
  if (beta == 0.0) {
    report.converged = true;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  const int max_steps = static_cast<int>(std::min<Eigen::Index>(maxiter, n));
  Eigen::MatrixXcd basis(n, max_steps + 1);
  Eigen::MatrixXcd hessenberg = Eigen::MatrixXcd::Zero(max_steps + 1, max_steps);
  std::vector<double> cs(static_cast<std::size_t>(max_steps));
  std::vector<Complex> sn(static_cast<std::size_t>(max_steps));
  ComplexVector g = ComplexVector::Zero(max_steps + 1);
  g[0] = beta;
  basis.col(0) = r0 / beta;
  report.residual_history.push_back(1.0);

  int steps = 0;
  for (int j = 0; j < max_steps; ++j) {
    ComplexVector w = precondition(apply_operator(basis.col(j)));
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const Complex h = basis.col(i).dot(w);
        hessenberg(i, j) += h;
        w -= h * basis.col(i);
      }
    }
    const double h_next = w.norm();
    const double column_norm = std::hypot(hessenberg.col(j).head(j + 1).norm(), h_next);
    hessenberg(j + 1, j) = h_next;

    for (int i = 0; i < j; ++i) {
      const Complex a = hessenberg(i, j);
      const Complex c = hessenberg(i + 1, j);
      hessenberg(i, j) = cs[i] * a + sn[i] * c;
      hessenberg(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c;
    }
    const Complex a = hessenberg(j, j);
    const double abs_a = std::abs(a);
    const double denom = std::hypot(abs_a, h_next);
    if (abs_a == 0.0) {
      cs[j] = 0.0;
      sn[j] = 1.0;
    } else {
      cs[j] = abs_a / denom;
      sn[j] = (a / abs_a) * h_next / denom;
    }
    hessenberg(j, j) = cs[j] * a + sn[j] * h_next;
    hessenberg(j + 1, j) = 0.0;
    g[j + 1] = -std::conj(sn[j]) * g[j];
    g[j] = cs[j] * g[j];

    steps = j + 1;
    const double relative = std::abs(g[j + 1]) / beta;
    // History stays strictly positive for plotting on a log axis.
    report.residual_history.push_back(std::max(relative, std::numeric_limits<double>::denorm_min()));
    if (relative <= tol) {
      report.converged = true;
      break;
    }
    if (h_next <= 1e-14 * column_norm) {
      // Invariant Krylov subspace: the least-squares solution is exact.
      report.converged = relative <= tol;
      break;
    }
    basis.col(j + 1) = w / h_next;
  }

  if (steps > 0) {
    const ComplexVector y = hessenberg.topLeftCorner(steps, steps)
                                .triangularView<Eigen::Upper>()
                                .solve(g.head(steps));
    result.x = basis.leftCols(steps) * y;
  }
  report.iterations = steps;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

GmresResult gmres_solve(const BlockOperator& A, const ComplexVector& b, const MassPreconditioner& P, double tol,
                        int maxiter) {
  if (b.size() != A.rows() || A.rows() != A.cols() || P.size_first() + P.size_second() != A.rows()) {
    throw ContractError("GMRES operands have inconsistent dimensions");
  }
  return gmres([&A](const ComplexVector& x) { return A.apply(x); },
               [&P](const ComplexVector& r) { return P.apply(r); }, b, tol, maxiter);
}

}  // namespace weakbem
