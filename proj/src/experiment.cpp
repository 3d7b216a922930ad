#include "weakbem/experiment.hpp"

#include "weakbem/analytic.hpp"
#include "weakbem/error.hpp"
#include "weakbem/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace weakbem {

namespace {

constexpr double kDefaultK = 3.0;
constexpr double kDefaultBetaSweepK = 2.759;
constexpr double kDefaultHTarget = 0.25;
const Complex kDefaultBeta{1.0, -1.0};

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
  }
  return value;
}

// "u:p1,l:dp0"; the u-space must be P1 because W is assembled in its
// integrated-by-parts form.
SpaceKind parse_space_pair(const std::string& text) {
  std::optional<SpaceKind> lambda_kind;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("space entries take the form u:<kind> or l:<kind>, got '" + part + "'");
    }
    const std::string which = normalize_key(trim(part.substr(0, colon)));
    SpaceKind kind;
    try {
      kind = parse_space_kind(trim(part.substr(colon + 1)));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (which == "u") {
      if (kind != SpaceKind::P1) {
        throw ConfigError("the u-space must be p1");
      }
    } else if (which == "l" || which == "lambda") {
      lambda_kind = kind;
    } else {
      throw ConfigError("unknown space component '" + which + "'");
    }
  }
  if (!lambda_kind) {
    throw ConfigError("space specification lacks an l:<kind> entry");
  }
  return *lambda_kind;
}

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::sweep_k: return "sweep-k";
    case ExperimentKind::sweep_beta_real: return "sweep-beta-real";
    case ExperimentKind::sweep_beta_imag: return "sweep-beta-imag";
    case ExperimentKind::converge: return "converge";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  const std::string key = normalize_key(trim(name));
  for (auto kind : {ExperimentKind::solve, ExperimentKind::sweep_k, ExperimentKind::sweep_beta_real,
                    ExperimentKind::sweep_beta_imag, ExperimentKind::converge}) {
    if (key == to_string(kind)) {
      return kind;
    }
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

double ExperimentConfig::resolved_k() const {
  if (k) {
    return *k;
  }
  const bool beta_sweep = kind == ExperimentKind::sweep_beta_real || kind == ExperimentKind::sweep_beta_imag;
  return beta_sweep ? kDefaultBetaSweepK : kDefaultK;
}

Complex ExperimentConfig::resolved_beta() const { return beta.value_or(kDefaultBeta); }

std::vector<double> ExperimentConfig::k_grid() const {
  if (kind != ExperimentKind::sweep_k) {
    return {resolved_k()};
  }
  const auto n = static_cast<int>(std::llround((k_max - k_min) / k_step)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid.push_back(k_min + i * k_step);
  }
  return grid;
}

std::vector<Complex> ExperimentConfig::beta_grid() const {
  if (kind != ExperimentKind::sweep_beta_real && kind != ExperimentKind::sweep_beta_imag) {
    return {resolved_beta()};
  }
  const double lo = std::log10(beta_min);
  const auto n = static_cast<int>(std::llround((std::log10(beta_max) - lo) * beta_per_decade)) + 1;
  std::vector<double> magnitudes;
  for (int i = 0; i < n; ++i) {
    magnitudes.push_back(std::pow(10.0, lo + static_cast<double>(i) / beta_per_decade));
  }
  std::vector<Complex> grid;
  if (kind == ExperimentKind::sweep_beta_real) {
    for (double m : magnitudes) {
      grid.emplace_back(m, 0.0);
    }
  } else {
    for (auto it = magnitudes.rbegin(); it != magnitudes.rend(); ++it) {
      grid.emplace_back(1.0, -*it);
    }
    for (double m : magnitudes) {
      grid.emplace_back(1.0, m);
    }
  }
  return grid;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) {
      throw ConfigError(message);
    }
  };
  require(!k || (std::isfinite(*k) && *k > 0.0), "k must be positive and finite");
  if (kind == ExperimentKind::sweep_k) {
    require(std::isfinite(k_min) && k_min > 0.0, "k-min must be positive");
    require(std::isfinite(k_max) && k_max >= k_min, "k-max must not be below k-min");
    require(std::isfinite(k_step) && k_step > 0.0, "k-step must be positive");
  }
  if (kind == ExperimentKind::sweep_beta_real || kind == ExperimentKind::sweep_beta_imag) {
    require(beta_min > 0.0 && std::isfinite(beta_min), "beta-min must be positive");
    require(beta_max >= beta_min && std::isfinite(beta_max), "beta-max must not be below beta-min");
    require(beta_per_decade >= 1, "beta-per-decade must be at least 1");
    require(!beta, "beta-re/beta-im conflict with a beta sweep");
  } else {
    const Complex b = resolved_beta();
    require(std::isfinite(b.real()) && std::isfinite(b.imag()), "beta must be finite");
    require(b.real() > 0.0, "beta must have positive real part");
  }
  auto level_ok = [](int l) { return l >= 0 && l <= kMaxIcosphereLevel; };
  if (kind == ExperimentKind::converge) {
    require(!levels.empty(), "converge needs at least one level");
    require(std::all_of(levels.begin(), levels.end(), level_ok),
            "levels must lie in 0.." + std::to_string(kMaxIcosphereLevel));
    require(std::adjacent_find(levels.begin(), levels.end(), std::greater_equal<>()) == levels.end(),
            "levels must be strictly increasing");
    require(!mesh_file, "converge uses generated sphere meshes and does not accept a mesh file");
  } else {
    require(!level || level_ok(*level), "level must lie in 0.." + std::to_string(kMaxIcosphereLevel));
    require(!h_target || (*h_target > 0.0 && std::isfinite(*h_target)), "h-target must be positive");
    require(!(mesh_file && (level || h_target)), "mesh conflicts with level/h-target");
    if (h_target) {
      try {
        (void)icosphere_level_for_h(*h_target);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    if (mesh_file) {
      require(std::filesystem::exists(*mesh_file), "mesh file not found: " + mesh_file->string());
    }
  }
  require(quad.regular_order >= 1 && quad.regular_order <= kMaxTriangleOrder,
          "quad-order must lie in 1.." + std::to_string(kMaxTriangleOrder));
  require(quad.singular_order >= 2 && quad.singular_order <= kMaxTriangleOrder,
          "singular-order must lie in 2.." + std::to_string(kMaxTriangleOrder));
  require(quad.near_field_ratio >= 0.0 && std::isfinite(quad.near_field_ratio),
          "near-field-ratio must be nonnegative");
  require(gmres_tol > 0.0 && std::isfinite(gmres_tol), "gmres-tol must be positive");
  require(maxiter >= 1, "maxiter must be at least 1");
  require(threads >= 1, "threads must be at least 1");
}

void apply_config_value(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "experiment") {
    c.kind = parse_experiment_kind(value);
  } else if (key == "k") {
    c.k = parse_double(key, value);
  } else if (key == "k-min") {
    c.k_min = parse_double(key, value);
  } else if (key == "k-max") {
    c.k_max = parse_double(key, value);
  } else if (key == "k-step") {
    c.k_step = parse_double(key, value);
  } else if (key == "beta-re") {
    c.beta = Complex(parse_double(key, value), c.beta ? c.beta->imag() : 0.0);
  } else if (key == "beta-im") {
    c.beta = Complex(c.beta ? c.beta->real() : 0.0, parse_double(key, value));
  } else if (key == "beta-scaling") {
    const std::string v = normalize_key(value);
    if (v == "constant") {
      c.beta_scaling = PenaltyScaling::constant;
    } else if (v == "inverse-h") {
      c.beta_scaling = PenaltyScaling::inverse_h;
    } else {
      throw ConfigError("beta-scaling must be constant or inverse-h");
    }
  } else if (key == "beta-min") {
    c.beta_min = parse_double(key, value);
  } else if (key == "beta-max") {
    c.beta_max = parse_double(key, value);
  } else if (key == "beta-per-decade") {
    c.beta_per_decade = parse_int(key, value);
  } else if (key == "level") {
    c.level = parse_int(key, value);
  } else if (key == "h-target") {
    c.h_target = parse_double(key, value);
  } else if (key == "levels") {
    std::vector<int> levels;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      levels.push_back(parse_int(key, item));
    }
    c.levels = std::move(levels);
  } else if (key == "mesh") {
    c.mesh_file = value;
  } else if (key == "space") {
    c.space_lambda = parse_space_pair(value);
  } else if (key == "quad-order") {
    c.quad.regular_order = parse_int(key, value);
  } else if (key == "singular-order") {
    c.quad.singular_order = parse_int(key, value);
  } else if (key == "near-field-ratio") {
    c.quad.near_field_ratio = parse_double(key, value);
  } else if (key == "gmres-tol") {
    c.gmres_tol = parse_double(key, value);
  } else if (key == "maxiter") {
    c.maxiter = parse_int(key, value);
  } else if (key == "threads") {
    c.threads = parse_int(key, value);
  } else if (key == "out") {
    c.out = value;
  } else {
    throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    if (trim(line).empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::shared_ptr<const Mesh> OperatorCache::mesh_for_level(int level) {
  auto& slot = levels_[level];
  if (!slot) {
    slot = std::make_shared<const Mesh>(build_icosphere(level));
  }
  return slot;
}

std::shared_ptr<const Mesh> OperatorCache::mesh_from_file(const std::filesystem::path& path) {
  auto& slot = files_[std::filesystem::absolute(path).lexically_normal().string()];
  if (!slot) {
    slot = std::make_shared<const Mesh>(read_mesh(path));
  }
  return slot;
}

std::shared_ptr<const CalderonOperators> OperatorCache::operators(const std::shared_ptr<const Mesh>& mesh,
                                                                  SpaceKind space_lambda, double k,
                                                                  const QuadratureConfig& quad, int threads,
                                                                  bool retain) {
  // The thread count is not part of the key: assembly is thread-count independent.
  const Key key{mesh.get(), static_cast<int>(space_lambda), k, quad.regular_order, quad.singular_order,
                quad.near_field_ratio};
  if (const auto it = operators_.find(key); it != operators_.end()) {
    return it->second;
  }
  auto ops = assemble_calderon(DofSpace(mesh, SpaceKind::P1), DofSpace(mesh, space_lambda), Wavenumber(k), quad,
                               threads);
  if (retain) {
    operators_.emplace(key, ops);
  }
  return ops;
}

void OperatorCache::clear() {
  operators_.clear();
  levels_.clear();
  files_.clear();
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, OperatorCache* cache,
                                      const RowCallback& on_row) {
  config.validate();
  OperatorCache local_cache;
  OperatorCache& store = cache ? *cache : local_cache;

  std::vector<std::shared_ptr<const Mesh>> meshes;
  if (config.kind == ExperimentKind::converge) {
    for (int level : config.levels) {
      meshes.push_back(store.mesh_for_level(level));
    }
    std::stable_sort(meshes.begin(), meshes.end(),
                     [](const auto& a, const auto& b) { return a->h_max() > b->h_max(); });
  } else if (config.mesh_file) {
    try {
      meshes.push_back(store.mesh_from_file(*config.mesh_file));
    } catch (const Error& e) {
      throw ConfigError(std::string("cannot use mesh file: ") + e.what());
    }
  } else {
    const int level = config.level ? *config.level : icosphere_level_for_h(config.h_target.value_or(kDefaultHTarget));
    meshes.push_back(store.mesh_for_level(level));
  }

  const std::vector<double> ks = config.k_grid();
  const std::vector<Complex> betas = config.beta_grid();
  const std::string name = to_string(config.kind);
  // Validation of the bare forms (Re beta <= 0) is a library-level option,
  // not an experiment.
  const SystemOptions options{};

  std::vector<ResultRow> rows;
  rows.reserve(meshes.size() * ks.size() * betas.size());
  for (const auto& mesh : meshes) {
    const double h = mesh->h_max();
    for (double k : ks) {
      const auto assembly_start = std::chrono::steady_clock::now();
      std::shared_ptr<const CalderonOperators> ops;
      std::string assembly_failure;
      try {
        // Grid points of a k sweep never share operators; keeping them would
        // hold one dense assembly per point.
        ops = store.operators(mesh, config.space_lambda, k, config.quad, config.threads, ks.size() == 1);
      } catch (const Error& e) {
        assembly_failure = e.what();
      }
      double pending_assembly = std::chrono::duration<double>(std::chrono::steady_clock::now() - assembly_start).count();

      const BoundaryFunction exact_u = [k](const Point& x, const Point&) { return point_source_field(k, x); };
      const BoundaryFunction exact_lambda = [k](const Point& x, const Point& n) {
        return point_source_neumann_trace(k, x, n);
      };

      for (const Complex& beta_nominal : betas) {
        const auto start = std::chrono::steady_clock::now();
        const PenaltyParameter penalty{beta_nominal, config.beta_scaling};
        const Complex beta = penalty.effective(h);
        ResultRow row;
        row.experiment = name;
        row.k = k;
        row.beta_re = beta.real();
        row.beta_im = beta.imag();
        row.h = h;
        row.err_u = std::numeric_limits<double>::quiet_NaN();
        row.err_lambda = std::numeric_limits<double>::quiet_NaN();
        if (ops) {
          row.ndofs = ops->space_u.dof_count() + ops->space_lambda.dof_count();
          try {
            const BlockedDirichletSystem system = build_dirichlet_system(ops, penalty, exact_u, options);
            const DirichletSolve solved = solve_dirichlet(system, config.gmres_tol, config.maxiter);
            row.iterations = solved.report.iterations;
            row.converged = solved.report.converged;
            const ErrorMetric err = relative_error(solved.solution, exact_u, exact_lambda, beta);
            row.err_u = err.rel_l2_u;
            row.err_lambda = err.rel_l2_lambda;
            if (!row.converged) {
              row.failure = "GMRES did not reach the tolerance within " + std::to_string(config.maxiter) +
                            " iterations";
            }
          } catch (const Error& e) {
            row.failure = e.what();
          }
        } else {
          row.failure = assembly_failure;
        }
        row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() +
                     pending_assembly;
        pending_assembly = 0.0;
        if (on_row) {
          on_row(row);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string format_results(const std::vector<ResultRow>& rows, bool include_time) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.experiment;
    for (double v : {r.k, r.beta_re, r.beta_im, r.h}) {
      out += ',';
      out += format_number(v);
    }
    out += ',' + std::to_string(r.ndofs) + ',' + std::to_string(r.iterations) + ',' + (r.converged ? "1" : "0");
    out += ',' + format_number(r.err_u) + ',' + format_number(r.err_lambda) + ',';
    if (include_time) {
      out += format_number(r.time_s);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].failure.empty()) {
      out += "# row " + std::to_string(i + 1) + " failed: " + rows[i].failure + '\n';
    }
  }
  if (!rows.empty() && rows.front().experiment == to_string(ExperimentKind::converge)) {
    out += "# loglog_slope_err_lambda_vs_h = " + format_number(fit_loglog_slope(rows)) + '\n';
  }
  return out;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << format_results(rows);
  if (!out.flush()) {
    throw IoError("failed writing " + path.string());
  }
}

std::vector<ResultRow> parse_results(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kResultsHeader) {
    throw IoError("results header mismatch");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) {
      f.push_back(item);
    }
    if (!line.empty() && line.back() == ',') {
      f.emplace_back();
    }
    if (f.size() != 11) {
      throw IoError("malformed results row: " + line);
    }
    auto num = [&](const std::string& s) {
      if (s.empty()) {
        return 0.0;
      }
      if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
      }
      try {
        return parse_double("field", s);
      } catch (const ConfigError&) {
        throw IoError("malformed number in results row: " + line);
      }
    };
    ResultRow r;
    r.experiment = f[0];
    r.k = num(f[1]);
    r.beta_re = num(f[2]);
    r.beta_im = num(f[3]);
    r.h = num(f[4]);
    r.ndofs = static_cast<std::size_t>(num(f[5]));
    r.iterations = static_cast<int>(num(f[6]));
    r.converged = f[7] == "1";
    r.err_u = num(f[8]);
    r.err_lambda = num(f[9]);
    r.time_s = num(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_results(buffer.str());
}

double fit_loglog_slope(const std::vector<ResultRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const ResultRow& r : rows) {
    if (r.h > 0.0 && r.err_lambda > 0.0 && std::isfinite(r.h) && std::isfinite(r.err_lambda)) {
      pts.emplace_back(std::log(r.h), std::log(r.err_lambda));
    }
  }
  if (pts.size() < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace weakbem
