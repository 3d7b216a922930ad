#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

namespace weakbem {

using Point = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

/// Flat-triangle surface mesh of a closed, oriented surface.
///
/// Immutable after construction. Per-triangle geometry (normals, areas,
/// centroids, longest edge) is computed once in the constructor.
class Mesh {
public:
  /// Validates and takes ownership of the arrays. Throws ContractError when a
  /// triangle is degenerate, an index is out of range, or (with
  /// `require_closed`) some edge is not shared by exactly two oppositely
  /// oriented triangles.
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, bool require_closed = true);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<Point>& normals() const noexcept { return normals_; }
  const std::vector<Point>& centroids() const noexcept { return centroids_; }
  const std::vector<double>& areas() const noexcept { return areas_; }
  /// Longest edge of each triangle.
  const std::vector<double>& diameters() const noexcept { return diameters_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }
  double h_max() const noexcept { return h_max_; }

  std::array<Point, 3> corners(std::size_t t) const {
    const auto& tri = triangles_[t];
    return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
  }

private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Point> normals_;
  std::vector<Point> centroids_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  double h_max_ = 0.0;
};

enum class PairTag { coincident, edge_adjacent, vertex_adjacent, disjoint };

const char* to_string(PairTag tag);

/// Relation between two triangles of the same mesh.
struct PairClass {
  PairTag tag = PairTag::disjoint;
  /// (local index in triangle i, local index in triangle j) for every shared
  /// vertex, ascending in the local index of triangle i.
  std::vector<std::pair<int, int>> shared_vertices;
};

struct MeshStats {
  double h_max = 0.0;
  double min_area = 0.0;
  double total_area = 0.0;
  std::size_t n_vertices = 0;
  std::size_t n_triangles = 0;
};

inline constexpr int kMaxIcosphereLevel = 7;

/// Icosahedron refined `refinement_level` times by edge bisection, every vertex
/// projected onto the unit sphere. Throws CapacityError above level 7.
Mesh build_icosphere(int refinement_level);

/// Smallest icosphere level whose h_max does not exceed `h_target`.
int icosphere_level_for_h(double h_target);

PairClass classify_pair(const Mesh& mesh, std::size_t i, std::size_t j);

MeshStats mesh_stats(const Mesh& mesh);

/// Plain-text mesh: `nv nt`, then nv lines `x y z`, then nt lines `i j k`
/// (0-based, counter-clockwise seen from outside).
Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace weakbem
