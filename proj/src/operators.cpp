#include "weakbem/operators.hpp"

#include "weakbem/error.hpp"
#include "weakbem/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <mutex>

namespace weakbem {

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::V:
      return "V";
    case OperatorKind::K:
      return "K";
    case OperatorKind::Kadj:
      return "Kadj";
    case OperatorKind::W:
      return "W";
  }
  return "unknown";
}

namespace {

using Block = std::array<Complex, 9>;

/// Triangle rule mapped onto every triangle of the mesh, stored as
/// structure of arrays for the vectorized kernel loops.
struct MappedRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> ref_weights;
  std::array<std::vector<double>, 3> weighted_bary;  // ref_weights[q] * bary[q][j]
  std::vector<double> x;  // triangle-major, `size` points per triangle
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> jacobian;  // twice the triangle area
  std::size_t size = 0;

  MappedRule(const Mesh& mesh, const TriangleRule& rule) : ref_weights(rule.weights), size(rule.size()) {
    for (const auto& [s, t] : rule.points) {
      bary.push_back({1.0 - s - t, s, t});
    }
    for (int j = 0; j < 3; ++j) {
      for (std::size_t q = 0; q < size; ++q) {
        weighted_bary[j].push_back(ref_weights[q] * bary[q][j]);
      }
    }
    const std::size_t total = mesh.triangle_count() * size;
    x.reserve(total);
    y.reserve(total);
    z.reserve(total);
    for (std::size_t tri = 0; tri < mesh.triangle_count(); ++tri) {
      const auto c = mesh.corners(tri);
      jacobian.push_back(2.0 * mesh.areas()[tri]);
      for (std::size_t q = 0; q < size; ++q) {
        const Point p = bary[q][0] * c[0] + bary[q][1] * c[1] + bary[q][2] * c[2];
        x.push_back(p.x());
        y.push_back(p.y());
        z.push_back(p.z());
      }
    }
  }
};

struct RequestInfo {
  OperatorKind kind;
  SpaceKind trial_kind;
  SpaceKind test_kind;
  int trial_local;
  int test_local;
  const DofSpace* trial;
  const DofSpace* test;
};

/// Integrals of G, dG/dn_y and dG/dn_x against the nine products of
/// barycentric coordinates of one triangle pair, indexed [3 * test + trial].
/// Every requested block follows from these by linear combination.
struct PairMoments {
  Block g;
  Block dy;
  Block dx;
};

class PairAssembler {
public:
  PairAssembler(const Mesh& mesh, std::span<const RequestInfo> requests, double k, const QuadratureConfig& quad)
      : mesh_(mesh),
        k_(k),
        near_ratio_(quad.near_field_ratio),
        regular_(mesh, gauss_triangle(quad.regular_order)),
        near_(mesh, gauss_triangle(std::min(2 * quad.regular_order, kMaxTriangleOrder))),
        coincident_(singular_rule(PairTag::coincident, quad.singular_order)),
        edge_(singular_rule(PairTag::edge_adjacent, quad.singular_order)),
        vertex_(singular_rule(PairTag::vertex_adjacent, quad.singular_order)) {
    if (regular_.size > kBatch || near_.size > kBatch) {
      throw ConfigError("regular quadrature order too high for the kernel batch size");
    }
    for (const auto& r : requests) {
      needs_derivative_ = needs_derivative_ || r.kind == OperatorKind::K || r.kind == OperatorKind::Kadj;
    }
  }

  static constexpr std::size_t kBatch = 128;

  /// Moments for test triangle `tau` against trial triangle `sigma`.
  void pair_moments(std::size_t tau, std::size_t sigma, PairMoments& m) const {
    m.g.fill(Complex(0.0));
    m.dy.fill(Complex(0.0));
    m.dx.fill(Complex(0.0));
    const auto& a = mesh_.triangles()[tau];
    const auto& b = mesh_.triangles()[sigma];
    int shared = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        shared += a[i] == b[j];
      }
    }
    if (shared == 0) {
      const double dist = (mesh_.centroids()[tau] - mesh_.centroids()[sigma]).norm();
      const double diam = std::max(mesh_.diameters()[tau], mesh_.diameters()[sigma]);
      regular_moments(tau, sigma, dist < near_ratio_ * diam ? near_ : regular_, m);
    } else {
      singular_moments(tau, sigma, m);
    }
    for (const Block* block : {&m.g, &m.dy, &m.dx}) {
      for (const auto& v : *block) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw AssemblyError("non-finite Galerkin entry", tau, sigma);
        }
      }
    }
  }

private:
  /// Kernel values of one batch: G, dG/dn_y (trial normal), dG/dn_x (test normal).
  struct KernelBatch {
    std::array<double, kBatch> g_re;
    std::array<double, kBatch> g_im;
    std::array<double, kBatch> dy_re;
    std::array<double, kBatch> dy_im;
    std::array<double, kBatch> dx_re;
    std::array<double, kBatch> dx_im;
  };

  /// Separations (sx, sy, sz) = x - y, n <= kBatch.
  void kernels(const double* sx, const double* sy, const double* sz, std::size_t n, const Point& nx,
               const Point& ny, KernelBatch& out) const {
    std::array<double, kBatch> inv_r;
    std::array<double, kBatch> kr;
    std::array<double, kBatch> c;
    std::array<double, kBatch> s;
#pragma omp simd
    for (std::size_t q = 0; q < n; ++q) {
      const double r = std::sqrt(sx[q] * sx[q] + sy[q] * sy[q] + sz[q] * sz[q]);
      inv_r[q] = 1.0 / r;
      kr[q] = k_ * r;
    }
    cos_sin_batch(kr.data(), c.data(), s.data(), n);
#pragma omp simd
    for (std::size_t q = 0; q < n; ++q) {
      const double scale = kInvFourPi * inv_r[q];
      out.g_re[q] = scale * c[q];
      out.g_im[q] = scale * s[q];
    }
    if (!needs_derivative_) {
      return;
    }
    const double nx0 = nx.x(), nx1 = nx.y(), nx2 = nx.z();
    const double ny0 = ny.x(), ny1 = ny.y(), ny2 = ny.z();
#pragma omp simd
    for (std::size_t q = 0; q < n; ++q) {
      // (ik r - 1) e^{ikr} / (4 pi r^3), applied to (y - x) . n_y and (x - y) . n_x.
      const double fs = kInvFourPi * inv_r[q] * inv_r[q] * inv_r[q];
      const double fre = fs * (-c[q] - kr[q] * s[q]);
      const double fim = fs * (kr[q] * c[q] - s[q]);
      const double py = sx[q] * ny0 + sy[q] * ny1 + sz[q] * ny2;
      const double px = sx[q] * nx0 + sy[q] * nx1 + sz[q] * nx2;
      out.dy_re[q] = -fre * py;
      out.dy_im[q] = -fim * py;
      out.dx_re[q] = fre * px;
      out.dx_im[q] = fim * px;
    }
  }

  /// Sums of w[q] times each kernel component.
  struct WeightedSums {
    Complex g;
    Complex dy;
    Complex dx;
  };

  WeightedSums weighted_sums(const double* w, std::size_t n, const KernelBatch& kb) const {
    double g_re = 0.0, g_im = 0.0;
#pragma omp simd reduction(+ : g_re, g_im)
    for (std::size_t q = 0; q < n; ++q) {
      g_re += w[q] * kb.g_re[q];
      g_im += w[q] * kb.g_im[q];
    }
    WeightedSums out{Complex(g_re, g_im), Complex(0.0), Complex(0.0)};
    if (needs_derivative_) {
      double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
#pragma omp simd reduction(+ : a, b, c, d)
      for (std::size_t q = 0; q < n; ++q) {
        a += w[q] * kb.dy_re[q];
        b += w[q] * kb.dy_im[q];
        c += w[q] * kb.dx_re[q];
        d += w[q] * kb.dx_im[q];
      }
      out.dy = Complex(a, b);
      out.dx = Complex(c, d);
    }
    return out;
  }

  void regular_moments(std::size_t tau, std::size_t sigma, const MappedRule& rule, PairMoments& m) const {
    const Point& nx = mesh_.normals()[tau];
    const Point& ny = mesh_.normals()[sigma];
    const std::size_t n = rule.size;
    const double* yx = &rule.x[sigma * n];
    const double* yy = &rule.y[sigma * n];
    const double* yz = &rule.z[sigma * n];
    const double jac_x = rule.jacobian[tau];
    const double jac_y = rule.jacobian[sigma];
    std::array<double, kBatch> sx;
    std::array<double, kBatch> sy;
    std::array<double, kBatch> sz;
    KernelBatch kb;

    // The inner sums over trial points factor out of the test basis.
    for (std::size_t p = 0; p < n; ++p) {
      const double px = rule.x[tau * n + p];
      const double py = rule.y[tau * n + p];
      const double pz = rule.z[tau * n + p];
#pragma omp simd
      for (std::size_t q = 0; q < n; ++q) {
        sx[q] = px - yx[q];
        sy[q] = py - yy[q];
        sz[q] = pz - yz[q];
      }
      kernels(sx.data(), sy.data(), sz.data(), n, nx, ny, kb);
      std::array<WeightedSums, 3> trial;
      for (int j = 0; j < 3; ++j) {
        trial[j] = weighted_sums(rule.weighted_bary[j].data(), n, kb);
      }
      const auto& bx = rule.bary[p];
      for (int i = 0; i < 3; ++i) {
        const double w = rule.ref_weights[p] * jac_x * jac_y * bx[i];
        for (int j = 0; j < 3; ++j) {
          m.g[3 * i + j] += w * trial[j].g;
          m.dy[3 * i + j] += w * trial[j].dy;
          m.dx[3 * i + j] += w * trial[j].dx;
        }
      }
    }
  }

  void singular_moments(std::size_t tau, std::size_t sigma, PairMoments& m) const {
    // Points are generated for the ordered pair (lo, hi) and mirrored for the
    // reverse pair, so that (tau, sigma) and (sigma, tau) share one point set.
    const std::size_t lo = std::min(tau, sigma);
    const std::size_t hi = std::max(tau, sigma);
    const PairClass pc = classify_pair(mesh_, lo, hi);
    std::array<int, 3> perm_lo{0, 1, 2};
    std::array<int, 3> perm_hi{0, 1, 2};
    const PairRule* rule = &coincident_;
    if (pc.tag != PairTag::coincident) {
      rule = pc.tag == PairTag::edge_adjacent ? &edge_ : &vertex_;
      int shared = 0;
      for (const auto& [li, lj] : pc.shared_vertices) {
        perm_lo[shared] = li;
        perm_hi[shared] = lj;
        ++shared;
      }
      int mlo = shared;
      int mhi = shared;
      for (int v = 0; v < 3; ++v) {
        if (std::none_of(pc.shared_vertices.begin(), pc.shared_vertices.end(),
                         [v](const auto& s) { return s.first == v; })) {
          perm_lo[mlo++] = v;
        }
        if (std::none_of(pc.shared_vertices.begin(), pc.shared_vertices.end(),
                         [v](const auto& s) { return s.second == v; })) {
          perm_hi[mhi++] = v;
        }
      }
    }

    const auto c_lo = mesh_.corners(lo);
    const auto c_hi = mesh_.corners(hi);
    const double jac = 4.0 * mesh_.areas()[lo] * mesh_.areas()[hi];
    const bool swapped = tau != lo;
    const Point& nx = mesh_.normals()[tau];
    const Point& ny = mesh_.normals()[sigma];

    std::array<double, kBatch> sx;
    std::array<double, kBatch> sy;
    std::array<double, kBatch> sz;
    std::array<std::array<double, kBatch>, 3> wbx;  // weight times test barycentric
    std::array<std::array<double, kBatch>, 3> bys;
    std::array<double, kBatch> wij;
    KernelBatch kb;
    for (std::size_t start = 0; start < rule->size(); start += kBatch) {
      const std::size_t count = std::min(kBatch, rule->size() - start);
      for (std::size_t b = 0; b < count; ++b) {
        const auto& pt = rule->points[start + b];
        const std::array<double, 3> ref_lo{1.0 - pt[0] - pt[1], pt[0], pt[1]};
        const std::array<double, 3> ref_hi{1.0 - pt[2] - pt[3], pt[2], pt[3]};
        std::array<double, 3> bary_lo{};
        std::array<double, 3> bary_hi{};
        for (int v = 0; v < 3; ++v) {
          bary_lo[perm_lo[v]] = ref_lo[v];
          bary_hi[perm_hi[v]] = ref_hi[v];
        }
        const Point p_lo = bary_lo[0] * c_lo[0] + bary_lo[1] * c_lo[1] + bary_lo[2] * c_lo[2];
        const Point p_hi = bary_hi[0] * c_hi[0] + bary_hi[1] * c_hi[1] + bary_hi[2] * c_hi[2];
        const Point d = swapped ? Point(p_hi - p_lo) : Point(p_lo - p_hi);
        sx[b] = d.x();
        sy[b] = d.y();
        sz[b] = d.z();
        const auto& bx = swapped ? bary_hi : bary_lo;
        const auto& by = swapped ? bary_lo : bary_hi;
        const double w = rule->weights[start + b] * jac;
        for (int v = 0; v < 3; ++v) {
          wbx[v][b] = w * bx[v];
          bys[v][b] = by[v];
        }
      }
      kernels(sx.data(), sy.data(), sz.data(), count, nx, ny, kb);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
#pragma omp simd
          for (std::size_t b = 0; b < count; ++b) {
            wij[b] = wbx[i][b] * bys[j][b];
          }
          const WeightedSums sums = weighted_sums(wij.data(), count, kb);
          m.g[3 * i + j] += sums.g;
          m.dy[3 * i + j] += sums.dy;
          m.dx[3 * i + j] += sums.dx;
        }
      }
    }
  }

  const Mesh& mesh_;
  double k_;
  double near_ratio_;
  MappedRule regular_;
  MappedRule near_;
  PairRule coincident_;
  PairRule edge_;
  PairRule vertex_;
  bool needs_derivative_ = false;
};

/// Local block of one request from the pair moments. Piecewise constant
/// spaces sum the barycentric index out, since the coordinates sum to one.
Block request_block(const RequestInfo& req, const PairMoments& m, double k, double normal_dot,
                    const std::array<Point, 3>* curl_test, const std::array<Point, 3>* curl_trial) {
  Block full;
  switch (req.kind) {
    case OperatorKind::V:
      full = m.g;
      break;
    case OperatorKind::K:
      full = m.dy;
      break;
    case OperatorKind::Kadj:
      full = m.dx;
      break;
    case OperatorKind::W: {
      Complex total_g = 0.0;
      for (const auto& v : m.g) {
        total_g += v;
      }
      const double factor = -k * k * normal_dot;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          full[3 * i + j] = factor * m.g[3 * i + j] + (*curl_test)[i].dot((*curl_trial)[j]) * total_g;
        }
      }
      break;
    }
  }
  if (req.trial_kind == SpaceKind::DP0) {
    for (int i = 0; i < 3; ++i) {
      full[3 * i] = full[3 * i] + full[3 * i + 1] + full[3 * i + 2];
    }
  }
  if (req.test_kind == SpaceKind::DP0) {
    for (int j = 0; j < 3; ++j) {
      full[j] = full[j] + full[3 + j] + full[6 + j];
    }
  }
  return full;
}

}  // namespace

std::vector<BoundaryOperatorMatrix> assemble_boundary_operators(std::span<const OperatorRequest> requests,
                                                                Wavenumber k, const QuadratureConfig& quad,
                                                                int threads) {
  if (requests.empty()) {
    return {};
  }
  const auto& mesh_ptr = requests.front().trial->mesh_ptr();
  std::vector<RequestInfo> infos;
  std::vector<BoundaryOperatorMatrix> result;
  for (const auto& req : requests) {
    if (!req.trial->same_mesh(*requests.front().trial) || !req.test->same_mesh(*requests.front().trial)) {
      throw ContractError("trial and test spaces must live on the same mesh");
    }
    if (req.kind == OperatorKind::W && (!req.trial->is_continuous() || !req.test->is_continuous())) {
      throw ContractError("the hypersingular operator requires continuous trial and test spaces");
    }
    infos.push_back({req.kind, req.trial->kind(), req.test->kind(), req.trial->local_count(),
                     req.test->local_count(), req.trial, req.test});
    result.push_back({req.kind,
                      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(req.test->dof_count()),
                                             static_cast<Eigen::Index>(req.trial->dof_count())),
                      *req.trial, *req.test, k.value()});
  }
  const Mesh& mesh = *mesh_ptr;
  const PairAssembler assembler(mesh, infos, k.value(), quad);
  // Surface curls of the P1 basis, constant per triangle.
  std::vector<std::array<Point, 3>> curls(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    const double inv = 1.0 / (2.0 * mesh.areas()[t]);
    for (int a = 0; a < 3; ++a) {
      curls[t][a] = (c[(a + 1) % 3] - c[(a + 2) % 3]) * inv;
    }
  }
  const std::size_t nt = mesh.triangle_count();
  const int nthreads = std::max(threads, 1);

  // Each test triangle produces one row strip per request. Strips are computed
  // in parallel and added to the matrices in ascending triangle order, which
  // makes the floating-point summation order independent of the schedule.
  struct Strip {
    std::vector<std::vector<Complex>> rows;  // per request: test_local x trial dofs
  };
  const std::size_t chunk = static_cast<std::size_t>(4 * nthreads);
  std::vector<Strip> strips(chunk);
  for (auto& s : strips) {
    s.rows.resize(infos.size());
    for (std::size_t r = 0; r < infos.size(); ++r) {
      s.rows[r].resize(static_cast<std::size_t>(infos[r].test_local) * infos[r].trial->dof_count());
    }
  }

  for (std::size_t start = 0; start < nt; start += chunk) {
    const std::size_t end = std::min(nt, start + chunk);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1)
    for (std::ptrdiff_t ti = static_cast<std::ptrdiff_t>(start); ti < static_cast<std::ptrdiff_t>(end); ++ti) {
      const auto tau = static_cast<std::size_t>(ti);
      Strip& strip = strips[tau - start];
      try {
        for (auto& row : strip.rows) {
          std::fill(row.begin(), row.end(), Complex(0.0));
        }
        PairMoments moments;
        for (std::size_t sigma = 0; sigma < nt; ++sigma) {
          assembler.pair_moments(tau, sigma, moments);
          const double normal_dot = mesh.normals()[tau].dot(mesh.normals()[sigma]);
          for (std::size_t r = 0; r < infos.size(); ++r) {
            const RequestInfo& req = infos[r];
            const Block block = request_block(req, moments, k.value(), normal_dot, &curls[tau], &curls[sigma]);
            const std::size_t ndof = req.trial->dof_count();
            auto& row = strip.rows[r];
            for (int i = 0; i < req.test_local; ++i) {
              for (int j = 0; j < req.trial_local; ++j) {
                row[static_cast<std::size_t>(i) * ndof + req.trial->global_dof(sigma, j)] += block[3 * i + j];
              }
            }
          }
        }
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
    if (failure) {
      std::rethrow_exception(failure);
    }
    for (std::size_t tau = start; tau < end; ++tau) {
      const Strip& strip = strips[tau - start];
      for (std::size_t r = 0; r < infos.size(); ++r) {
        const RequestInfo& req = infos[r];
        const auto ndof = static_cast<Eigen::Index>(req.trial->dof_count());
        for (int i = 0; i < req.test_local; ++i) {
          const Eigen::Map<const Eigen::RowVectorXcd> row(strip.rows[r].data() + i * ndof, ndof);
          result[r].entries.row(req.test->global_dof(tau, i)) += row;
        }
      }
    }
  }
  return result;
}

BoundaryOperatorMatrix assemble_boundary_operator(OperatorKind kind, const DofSpace& trial, const DofSpace& test,
                                                  Wavenumber k, const QuadratureConfig& quad, int threads) {
  const OperatorRequest request{kind, &trial, &test};
  auto result = assemble_boundary_operators(std::span(&request, 1), k, quad, threads);
  return std::move(result.front());
}

MassMatrix assemble_mass(const DofSpace& trial, const DofSpace& test) {
  if (!trial.same_mesh(test)) {
    throw ContractError("mass matrix spaces must live on the same mesh");
  }
  const Mesh& mesh = trial.mesh();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangle_count() * static_cast<std::size_t>(trial.local_count() * test.local_count()));
  const bool trial_const = trial.kind() == SpaceKind::DP0;
  const bool test_const = test.kind() == SpaceKind::DP0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.areas()[t];
    for (int i = 0; i < test.local_count(); ++i) {
      for (int j = 0; j < trial.local_count(); ++j) {
        double value = 0.0;
        if (trial_const && test_const) {
          value = area;
        } else if (trial_const || test_const) {
          value = area / 3.0;
        } else {
          value = i == j ? area / 6.0 : area / 12.0;
        }
        triplets.emplace_back(test.global_dof(t, i), trial.global_dof(t, j), value);
      }
    }
  }
  Eigen::SparseMatrix<double> entries(static_cast<Eigen::Index>(test.dof_count()),
                                      static_cast<Eigen::Index>(trial.dof_count()));
  entries.setFromTriplets(triplets.begin(), triplets.end());
  return {std::move(entries), trial, test};
}

namespace {

void write_le_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  }
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_le_u64(std::ifstream& in) {
  unsigned char bytes[8] = {};
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return v;
}

void write_le_double(std::ofstream& out, double d) { write_le_u64(out, std::bit_cast<std::uint64_t>(d)); }

double read_le_double(std::ifstream& in) { return std::bit_cast<double>(read_le_u64(in)); }

}  // namespace

void write_matrix_dump(const Eigen::MatrixXcd& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write matrix dump " + path.string());
  }
  write_le_u64(out, static_cast<std::uint64_t>(matrix.rows()));
  write_le_u64(out, static_cast<std::uint64_t>(matrix.cols()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      write_le_double(out, matrix(i, j).real());
      write_le_double(out, matrix(i, j).imag());
    }
  }
  if (!out) {
    throw IoError("failed while writing matrix dump " + path.string());
  }
}

Eigen::MatrixXcd read_matrix_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open matrix dump " + path.string());
  }
  const auto rows = static_cast<Eigen::Index>(read_le_u64(in));
  const auto cols = static_cast<Eigen::Index>(read_le_u64(in));
  if (!in) {
    throw IoError("truncated matrix dump header in " + path.string());
  }
  Eigen::MatrixXcd matrix(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = read_le_double(in);
      const double im = read_le_double(in);
      matrix(i, j) = Complex(re, im);
    }
  }
  if (!in) {
    throw IoError("truncated matrix dump " + path.string());
  }
  return matrix;
}

}  // namespace weakbem
