#include "weakbem/error.hpp"
#include "weakbem/solver.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>

using namespace weakbem;

namespace {

Eigen::SparseMatrix<double> spd_tridiagonal(Eigen::Index n, double diagonal) {
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, diagonal + 0.1 * static_cast<double>(i));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::shared_ptr<const Eigen::MatrixXcd> random_block(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::srand(seed);
  return std::make_shared<const Eigen::MatrixXcd>(Eigen::MatrixXcd::Random(rows, cols));
}

ComplexVector random_vector(Eigen::Index n, unsigned seed) {
  std::srand(seed);
  return ComplexVector::Random(n);
}

BlockOperator identity_operator(Eigen::Index n0, Eigen::Index n1) {
  std::array<std::array<BlockTerm, 2>, 2> blocks{};
  blocks[0][0].dense = std::make_shared<const Eigen::MatrixXcd>(Eigen::MatrixXcd::Identity(n0, n0));
  blocks[1][1].dense = std::make_shared<const Eigen::MatrixXcd>(Eigen::MatrixXcd::Identity(n1, n1));
  return BlockOperator({n0, n1}, {n0, n1}, blocks);
}

ComplexVector mass_apply(const Eigen::SparseMatrix<double>& m0, const Eigen::SparseMatrix<double>& m1,
                         const ComplexVector& v) {
  ComplexVector out(v.size());
  out.head(m0.rows()) = m0.cast<Complex>() * v.head(m0.rows());
  out.tail(m1.rows()) = m1.cast<Complex>() * v.tail(m1.rows());
  return out;
}

}  // namespace

TEST(BlockOperator, ApplyDistributesOverBlocks) {
  const Eigen::Index n0 = 5;
  const Eigen::Index n1 = 3;
  std::array<std::array<BlockTerm, 2>, 2> blocks{};
  blocks[0][0].dense = random_block(n0, n0, 1);
  blocks[0][1].dense = random_block(n0, n1, 2);
  blocks[0][1].dense_scale = Complex(0.5, -2.0);
  blocks[1][0].dense = random_block(n1, n0, 3);
  blocks[1][1].sparse = spd_tridiagonal(n1, 4.0).cast<Complex>();
  const BlockOperator op({n0, n1}, {n0, n1}, blocks);
  EXPECT_EQ(op.rows(), n0 + n1);
  const ComplexVector x = random_vector(n0 + n1, 4);
  const Eigen::MatrixXcd dense = op.to_dense();
  EXPECT_LT((op.apply(x) - dense * x).norm(), 1e-13);
  EXPECT_LT((dense.topLeftCorner(n0, n0) - *blocks[0][0].dense).norm(), 1e-15);
  EXPECT_LT((dense.topRightCorner(n0, n1) - Complex(0.5, -2.0) * *blocks[0][1].dense).norm(), 1e-14);
  EXPECT_LT((op.apply(x + x) - 2.0 * op.apply(x)).norm(), 1e-13);
}

TEST(BlockOperator, InconsistentShapesAreContractErrors) {
  std::array<std::array<BlockTerm, 2>, 2> blocks{};
  blocks[0][0].dense = random_block(4, 3, 1);
  EXPECT_THROW(BlockOperator({4, 2}, {4, 2}, blocks), ContractError);
  const BlockOperator ok = identity_operator(2, 2);
  EXPECT_THROW(ok.apply(ComplexVector::Ones(3)), ContractError);
}

TEST(MassPreconditioner, InvertsMassMatrices) {
  const auto m0 = spd_tridiagonal(7, 3.0);
  const auto m1 = spd_tridiagonal(4, 2.5);
  const MassPreconditioner p = build_preconditioner(m0, m1);
  EXPECT_EQ(p.size_first(), 7);
  EXPECT_EQ(p.size_second(), 4);
  const ComplexVector v = random_vector(11, 9);
  EXPECT_LT((p.apply(mass_apply(m0, m1, v)) - v).norm() / v.norm(), 1e-10);
  EXPECT_EQ(p.apply(ComplexVector::Zero(11)), ComplexVector::Zero(11));
  const ComplexVector r = random_vector(11, 10);
  EXPECT_EQ(p.apply(r), p.apply(r));
  EXPECT_THROW(p.apply(ComplexVector::Ones(10)), ContractError);
}

TEST(MassPreconditioner, RejectsNonDefiniteInput) {
  const auto good = spd_tridiagonal(3, 3.0);
  Eigen::SparseMatrix<double> indefinite = spd_tridiagonal(3, 3.0);
  indefinite.coeffRef(0, 0) = -5.0;
  Eigen::SparseMatrix<double> skew = spd_tridiagonal(3, 3.0);
  skew.coeffRef(0, 1) = 0.5;
  EXPECT_THROW(build_preconditioner(good, indefinite), FactorizationError);
  EXPECT_THROW(build_preconditioner(skew, good), FactorizationError);
  EXPECT_THROW(build_preconditioner(Eigen::SparseMatrix<double>(3, 2), good), FactorizationError);
}

TEST(Gmres, IdentityConvergesInOneIteration) {
  const BlockOperator op = identity_operator(4, 3);
  const MassPreconditioner p = build_preconditioner(spd_tridiagonal(4, 3.0), spd_tridiagonal(3, 3.0));
  const ComplexVector b = random_vector(7, 3);
  const GmresResult plain = gmres([](const ComplexVector& x) { return x; }, {}, b, 1e-10, 50);
  EXPECT_EQ(plain.report.iterations, 1);
  EXPECT_TRUE(plain.report.converged);
  EXPECT_LT((plain.x - b).norm(), 1e-12);
  const GmresResult blocked = gmres_solve(op, b, p, 1e-10);
  EXPECT_TRUE(blocked.report.converged);
  EXPECT_LT((blocked.x - b).norm(), 1e-9);
}

TEST(Gmres, ThreeDistinctEigenvaluesNeedAtMostThreeIterations) {
  ComplexVector d(30);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    d[i] = i % 3 == 0 ? Complex(1.0, 0.0) : i % 3 == 1 ? Complex(2.0, 1.0) : Complex(-3.0, 0.5);
  }
  const ComplexVector b = random_vector(30, 5);
  const GmresResult r = gmres([&](const ComplexVector& x) { return ComplexVector(d.cwiseProduct(x)); }, {}, b,
                              1e-10, 100);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 3);
  EXPECT_LT((d.cwiseProduct(r.x) - b).norm() / b.norm(), 1e-9);
}

TEST(Gmres, ResidualHistoryIsPositiveAndMonotone) {
  const Eigen::Index n = 60;
  std::srand(21);
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) * 3.0 + 0.3 * Eigen::MatrixXcd::Random(n, n);
  const ComplexVector b = random_vector(n, 22);
  const auto m0 = spd_tridiagonal(40, 3.0);
  const auto m1 = spd_tridiagonal(20, 3.0);
  const MassPreconditioner p = build_preconditioner(m0, m1);
  const double tol = 1e-8;
  const GmresResult r = gmres([&](const ComplexVector& x) { return ComplexVector(a * x); },
                              [&](const ComplexVector& x) { return p.apply(x); }, b, tol, 1000);
  ASSERT_TRUE(r.report.converged);
  ASSERT_FALSE(r.report.residual_history.empty());
  for (std::size_t i = 0; i < r.report.residual_history.size(); ++i) {
    EXPECT_GT(r.report.residual_history[i], 0.0);
    if (i > 0) {
      EXPECT_LE(r.report.residual_history[i], r.report.residual_history[i - 1]);
    }
  }
  EXPECT_LE(r.report.achieved_tolerance(), tol);
  EXPECT_GE(r.report.wall_time, 0.0);
  // The stopping test is on the preconditioned residual; the true residual
  // stays within a factor set by the mass-matrix conditioning.
  EXPECT_LE((a * r.x - b).norm() / b.norm(), 10.0 * tol);
}

TEST(Gmres, MaxiterReturnsUnconvergedResult) {
  const Eigen::Index n = 40;
  std::srand(31);
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(n, n);
  const ComplexVector b = random_vector(n, 32);
  const GmresResult r = gmres([&](const ComplexVector& x) { return ComplexVector(a * x); }, {}, b, 1e-12, 5);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 5);
  EXPECT_GT(r.report.achieved_tolerance(), 1e-12);
}

TEST(Gmres, ZeroRightHandSideGivesZeroSolution) {
  const GmresResult r = gmres([](const ComplexVector& x) { return ComplexVector(2.0 * x); }, {},
                              ComplexVector::Zero(5), 1e-8, 10);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  EXPECT_EQ(r.x, ComplexVector::Zero(5));
}

TEST(Gmres, InvalidArgumentsAreContractErrors) {
  const ComplexVector b = ComplexVector::Ones(3);
  const auto id = [](const ComplexVector& x) { return x; };
  EXPECT_THROW(gmres(id, {}, b, 0.0, 10), ContractError);
  const BlockOperator op = identity_operator(2, 2);
  const MassPreconditioner p = build_preconditioner(spd_tridiagonal(2, 3.0), spd_tridiagonal(2, 3.0));
  EXPECT_THROW(gmres_solve(op, b, p, 1e-6), ContractError);
}
