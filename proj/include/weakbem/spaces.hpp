#pragma once

#include "weakbem/kernel.hpp"
#include "weakbem/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace weakbem {

enum class SpaceKind { P1, DP0, DP1 };

const char* to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& name);

using ComplexVector = Eigen::VectorXcd;

/// Function on the boundary, evaluated at a point with the outward unit
/// normal there.
using BoundaryFunction = std::function<Complex(const Point& x, const Point& normal)>;

/// Piecewise-polynomial trace space on a mesh.
///
/// P1 is continuous piecewise linear (one dof per vertex), DP0 is piecewise
/// constant and DP1 discontinuous piecewise linear, both per triangle. Local
/// basis functions of P1 and DP1 are the barycentric coordinates of the
/// triangle's local vertices.
class DofSpace {
public:
  DofSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

  SpaceKind kind() const noexcept { return kind_; }
  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  std::size_t dof_count() const noexcept { return dof_count_; }
  /// Number of local basis functions per triangle (1 or 3).
  int local_count() const noexcept { return kind_ == SpaceKind::DP0 ? 1 : 3; }
  bool is_continuous() const noexcept { return kind_ == SpaceKind::P1; }

  /// Global dof of local basis function `a` on triangle `t`.
  int global_dof(std::size_t t, int a) const noexcept { return local_to_global_[t][a]; }

  bool same_mesh(const DofSpace& other) const noexcept { return mesh_ == other.mesh_; }

private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_;
  std::size_t dof_count_ = 0;
  std::vector<std::array<int, 3>> local_to_global_;
};

/// Local basis values at barycentric coordinates `bary`; only the first
/// local_count() entries are meaningful.
inline std::array<double, 3> basis_values(SpaceKind kind, const std::array<double, 3>& bary) {
  if (kind == SpaceKind::DP0) {
    return {1.0, 0.0, 0.0};
  }
  return bary;
}

/// Area-weighted average of the face normals around each vertex.
std::vector<Point> vertex_normals(const Mesh& mesh);

/// Nodal interpolation: vertex values (with averaged vertex normals) for P1,
/// triangle-corner values for DP1, centroid values for DP0.
ComplexVector interpolate(const DofSpace& space, const BoundaryFunction& f);

/// Value of the discrete function with `coeffs` on triangle `t` at barycentric
/// coordinates `bary`.
Complex evaluate(const DofSpace& space, const ComplexVector& coeffs, std::size_t t,
                 const std::array<double, 3>& bary);

/// Integrals of `f` against every basis function, by the given triangle
/// quadrature order.
ComplexVector project_onto_basis(const DofSpace& space, const BoundaryFunction& f, int order);

}  // namespace weakbem
