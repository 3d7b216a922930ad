#include "weakbem/mesh.hpp"

#include "weakbem/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

namespace weakbem {

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, bool require_closed)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<int>(vertices_.size());
  normals_.reserve(triangles_.size());
  centroids_.reserve(triangles_.size());
  areas_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw ContractError("triangle " + std::to_string(t) + " references vertex " +
                            std::to_string(v) + " outside [0, " + std::to_string(nv) + ")");
      }
    }
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    const Point cross = (b - a).cross(c - a);
    const double twice_area = cross.norm();
    if (!(twice_area > 0.0)) {
      throw ContractError("triangle " + std::to_string(t) + " has zero area");
    }
    normals_.push_back(cross / twice_area);
    areas_.push_back(0.5 * twice_area);
    centroids_.push_back((a + b + c) / 3.0);
    const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    diameters_.push_back(diam);
    h_max_ = std::max(h_max_, diam);
  }

  if (require_closed) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& tri : triangles_) {
      for (int e = 0; e < 3; ++e) {
        ++directed[{tri[e], tri[(e + 1) % 3]}];
      }
    }
    for (const auto& [edge, count] : directed) {
      const auto reverse = directed.find({edge.second, edge.first});
      if (count != 1 || reverse == directed.end() || reverse->second != 1) {
        throw ContractError("mesh is not closed and consistently oriented at edge (" +
                            std::to_string(edge.first) + ", " + std::to_string(edge.second) + ")");
      }
    }
  }
}

const char* to_string(PairTag tag) {
  switch (tag) {
    case PairTag::coincident:
      return "coincident";
    case PairTag::edge_adjacent:
      return "edge_adjacent";
    case PairTag::vertex_adjacent:
      return "vertex_adjacent";
    case PairTag::disjoint:
      return "disjoint";
  }
  return "unknown";
}

namespace {

void refine_once(std::vector<Point>& vertices, std::vector<Triangle>& triangles) {
  std::unordered_map<std::uint64_t, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    const std::uint64_t key = (lo << 32) | hi;
    if (auto it = midpoints.find(key); it != midpoints.end()) {
      return it->second;
    }
    vertices.push_back((vertices[a] + vertices[b]).normalized());
    const int index = static_cast<int>(vertices.size()) - 1;
    midpoints.emplace(key, index);
    return index;
  };

  std::vector<Triangle> refined;
  refined.reserve(4 * triangles.size());
  for (const auto& [a, b, c] : triangles) {
    const int ab = midpoint(a, b);
    const int bc = midpoint(b, c);
    const int ca = midpoint(c, a);
    refined.push_back({a, ab, ca});
    refined.push_back({b, bc, ab});
    refined.push_back({c, ca, bc});
    refined.push_back({ab, bc, ca});
  }
  triangles = std::move(refined);
}

}  // namespace

Mesh build_icosphere(int refinement_level) {
  if (refinement_level < 0) {
    throw ContractError("refinement level must be nonnegative");
  }
  if (refinement_level > kMaxIcosphereLevel) {
    throw CapacityError("icosphere refinement level " + std::to_string(refinement_level) +
                        " exceeds the limit of " + std::to_string(kMaxIcosphereLevel));
  }

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point> vertices = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (auto& v : vertices) {
    v.normalize();
  }
  std::vector<Triangle> triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
  };

  for (int level = 0; level < refinement_level; ++level) {
    refine_once(vertices, triangles);
  }

  // Outward orientation: the winding normal must point away from the origin.
  for (auto& tri : triangles) {
    const Point& a = vertices[tri[0]];
    const Point& b = vertices[tri[1]];
    const Point& c = vertices[tri[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) {
      std::swap(tri[1], tri[2]);
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

int icosphere_level_for_h(double h_target) {
  if (!(h_target > 0.0)) {
    throw ConfigError("target mesh size must be positive");
  }
  for (int level = 0; level <= kMaxIcosphereLevel; ++level) {
    if (build_icosphere(level).h_max() <= h_target) {
      return level;
    }
  }
  throw CapacityError("no icosphere level up to " + std::to_string(kMaxIcosphereLevel) +
                      " reaches h_max <= " + std::to_string(h_target));
}

PairClass classify_pair(const Mesh& mesh, std::size_t i, std::size_t j) {
  if (i >= mesh.triangle_count() || j >= mesh.triangle_count()) {
    throw ContractError("triangle index out of range");
  }
  const auto& a = mesh.triangles()[i];
  const auto& b = mesh.triangles()[j];
  PairClass result;
  for (int li = 0; li < 3; ++li) {
    for (int lj = 0; lj < 3; ++lj) {
      if (a[li] == b[lj]) {
        result.shared_vertices.emplace_back(li, lj);
      }
    }
  }
  switch (result.shared_vertices.size()) {
    case 3:
      result.tag = PairTag::coincident;
      break;
    case 2:
      result.tag = PairTag::edge_adjacent;
      break;
    case 1:
      result.tag = PairTag::vertex_adjacent;
      break;
    default:
      result.tag = PairTag::disjoint;
      break;
  }
  return result;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats stats;
  stats.h_max = mesh.h_max();
  stats.n_vertices = mesh.vertex_count();
  stats.n_triangles = mesh.triangle_count();
  const auto& areas = mesh.areas();
  if (!areas.empty()) {
    stats.min_area = *std::min_element(areas.begin(), areas.end());
  }
  for (double a : areas) {
    stats.total_area += a;
  }
  return stats;
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open mesh file " + path.string());
  }
  long long nv = -1;
  long long nt = -1;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1) {
    throw IoError("malformed mesh header in " + path.string());
  }
  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    if (!(in >> v.x() >> v.y() >> v.z())) {
      throw IoError("truncated vertex list in " + path.string());
    }
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& tri : triangles) {
    if (!(in >> tri[0] >> tri[1] >> tri[2])) {
      throw IoError("truncated triangle list in " + path.string());
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write mesh file " + path.string());
  }
  out.precision(17);
  out << mesh.vertex_count() << ' ' << mesh.triangle_count() << '\n';
  for (const auto& v : mesh.vertices()) {
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto& tri : mesh.triangles()) {
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  if (!out) {
    throw IoError("failed while writing mesh file " + path.string());
  }
}

}  // namespace weakbem
