#include "weakbem/spaces.hpp"

#include "weakbem/error.hpp"
#include "weakbem/quadrature.hpp"

namespace weakbem {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P1:
      return "p1";
    case SpaceKind::DP0:
      return "dp0";
    case SpaceKind::DP1:
      return "dp1";
  }
  return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "p1") return SpaceKind::P1;
  if (name == "dp0") return SpaceKind::DP0;
  if (name == "dp1") return SpaceKind::DP1;
  throw ConfigError("unknown space '" + name + "' (expected p1, dp0 or dp1)");
}

DofSpace::DofSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind) : mesh_(std::move(mesh)), kind_(kind) {
  if (!mesh_) {
    throw ContractError("DofSpace requires a mesh");
  }
  const auto nt = mesh_->triangle_count();
  local_to_global_.resize(nt);
  switch (kind_) {
    case SpaceKind::P1:
      dof_count_ = mesh_->vertex_count();
      for (std::size_t t = 0; t < nt; ++t) {
        local_to_global_[t] = mesh_->triangles()[t];
      }
      break;
    case SpaceKind::DP0:
      dof_count_ = nt;
      for (std::size_t t = 0; t < nt; ++t) {
        local_to_global_[t] = {static_cast<int>(t), -1, -1};
      }
      break;
    case SpaceKind::DP1:
      dof_count_ = 3 * nt;
      for (std::size_t t = 0; t < nt; ++t) {
        const int base = static_cast<int>(3 * t);
        local_to_global_[t] = {base, base + 1, base + 2};
      }
      break;
  }
}

std::vector<Point> vertex_normals(const Mesh& mesh) {
  std::vector<Point> normals(mesh.vertex_count(), Point::Zero());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    for (int v : mesh.triangles()[t]) {
      normals[v] += mesh.areas()[t] * mesh.normals()[t];
    }
  }
  for (auto& n : normals) {
    n.normalize();
  }
  return normals;
}

ComplexVector interpolate(const DofSpace& space, const BoundaryFunction& f) {
  const Mesh& mesh = space.mesh();
  ComplexVector coeffs(static_cast<Eigen::Index>(space.dof_count()));
  switch (space.kind()) {
    case SpaceKind::P1: {
      const auto normals = vertex_normals(mesh);
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        coeffs[static_cast<Eigen::Index>(v)] = f(mesh.vertices()[v], normals[v]);
      }
      break;
    }
    case SpaceKind::DP0:
      for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        coeffs[static_cast<Eigen::Index>(t)] = f(mesh.centroids()[t], mesh.normals()[t]);
      }
      break;
    case SpaceKind::DP1:
      for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto corners = mesh.corners(t);
        for (int a = 0; a < 3; ++a) {
          coeffs[space.global_dof(t, a)] = f(corners[a], mesh.normals()[t]);
        }
      }
      break;
  }
  return coeffs;
}

Complex evaluate(const DofSpace& space, const ComplexVector& coeffs, std::size_t t,
                 const std::array<double, 3>& bary) {
  const auto phi = basis_values(space.kind(), bary);
  Complex value = 0.0;
  for (int a = 0; a < space.local_count(); ++a) {
    value += phi[a] * coeffs[space.global_dof(t, a)];
  }
  return value;
}

ComplexVector project_onto_basis(const DofSpace& space, const BoundaryFunction& f, int order) {
  const Mesh& mesh = space.mesh();
  const TriangleRule rule = gauss_triangle(order);
  ComplexVector result = ComplexVector::Zero(static_cast<Eigen::Index>(space.dof_count()));
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto corners = mesh.corners(t);
    const double jac = 2.0 * mesh.areas()[t];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [s, u] = rule.points[q];
      const std::array<double, 3> bary{1.0 - s - u, s, u};
      const Point x = bary[0] * corners[0] + bary[1] * corners[1] + bary[2] * corners[2];
      const Complex fx = f(x, mesh.normals()[t]) * (rule.weights[q] * jac);
      const auto phi = basis_values(space.kind(), bary);
      for (int a = 0; a < space.local_count(); ++a) {
        result[space.global_dof(t, a)] += phi[a] * fx;
      }
    }
  }
  return result;
}

}  // namespace weakbem
