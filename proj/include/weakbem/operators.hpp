#pragma once

#include "weakbem/kernel.hpp"
#include "weakbem/spaces.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <filesystem>
#include <span>
#include <vector>

namespace weakbem {

/// Boundary integral operators: single layer V, double layer K, adjoint
/// double layer Kadj and hypersingular W.
enum class OperatorKind { V, K, Kadj, W };

const char* to_string(OperatorKind kind);

struct QuadratureConfig {
  int regular_order = 4;
  int singular_order = 4;
  /// Disjoint pairs whose centroid distance is below this multiple of the
  /// larger diameter use twice the regular order.
  double near_field_ratio = 2.0;
};

/// Dense Galerkin matrix: rows are test dofs, columns trial dofs.
struct BoundaryOperatorMatrix {
  OperatorKind kind;
  Eigen::MatrixXcd entries;
  DofSpace trial;
  DofSpace test;
  double wavenumber;
};

struct OperatorRequest {
  OperatorKind kind;
  const DofSpace* trial;
  const DofSpace* test;
};

/// Assembles several operators in a single sweep over triangle pairs, sharing
/// the kernel evaluations. The result is independent of `threads`.
///
/// W uses the regularized form
///   <W u, v> = int int G(x,y) [curl v(x) . curl u(y) - k^2 (n_x . n_y) v(x) u(y)]
/// and therefore requires continuous (P1) trial and test spaces.
std::vector<BoundaryOperatorMatrix> assemble_boundary_operators(std::span<const OperatorRequest> requests,
                                                                Wavenumber k, const QuadratureConfig& quad,
                                                                int threads = 1);

BoundaryOperatorMatrix assemble_boundary_operator(OperatorKind kind, const DofSpace& trial, const DofSpace& test,
                                                  Wavenumber k, const QuadratureConfig& quad = {},
                                                  int threads = 1);

/// Sparse L2 Gram matrix m_ij = (trial_j, test_i), integrated exactly.
struct MassMatrix {
  Eigen::SparseMatrix<double> entries;
  DofSpace trial;
  DofSpace test;
};

MassMatrix assemble_mass(const DofSpace& trial, const DofSpace& test);

/// Binary dump: rows and cols as little-endian int64, then row-major
/// (re, im) doubles.
void write_matrix_dump(const Eigen::MatrixXcd& matrix, const std::filesystem::path& path);
Eigen::MatrixXcd read_matrix_dump(const std::filesystem::path& path);

}  // namespace weakbem
