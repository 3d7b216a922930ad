#pragma once

#include "weakbem/formulation.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace weakbem {

enum class ExperimentKind { solve, sweep_k, sweep_beta_real, sweep_beta_imag, converge };

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Fully deterministic description of one experiment. Unset optional fields
/// take per-experiment defaults.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::solve;

  std::optional<double> k;  // solve/converge: 3, beta sweeps: 2.759
  double k_min = 1.0;
  double k_max = 5.0;
  double k_step = 0.05;

  std::optional<Complex> beta;  // sweep_k/solve/converge: 1 - i
  PenaltyScaling beta_scaling = PenaltyScaling::constant;
  double beta_min = 1e-6;  // magnitude range of the beta sweeps
  double beta_max = 1e6;
  int beta_per_decade = 1;

  std::optional<int> level;
  std::optional<double> h_target;  // default 0.25 when neither level nor mesh is set
  std::vector<int> levels{1, 2, 3, 4};  // converge only
  std::optional<std::filesystem::path> mesh_file;

  SpaceKind space_lambda = SpaceKind::P1;
  QuadratureConfig quad;

  double gmres_tol = 1e-5;
  int maxiter = 1000;
  int threads = 1;
  std::optional<std::filesystem::path> out;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;

  double resolved_k() const;
  Complex resolved_beta() const;
  std::vector<double> k_grid() const;
  std::vector<Complex> beta_grid() const;
};

/// Set one field from its textual key. Keys use '-' or '_' interchangeably
/// (`k-min` and `k_min` are the same key). Throws ConfigError.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` file; '#' starts a comment.
ExperimentConfig parse_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

struct ResultRow {
  std::string experiment;
  double k = 0.0;
  double beta_re = 0.0;
  double beta_im = 0.0;
  double h = 0.0;
  std::size_t ndofs = 0;
  int iterations = 0;
  bool converged = false;
  double err_u = 0.0;
  double err_lambda = 0.0;
  double time_s = 0.0;
  std::string failure;  // not serialized into the row
};

/// Caches meshes and assembled Calderon operators across experiments, so
/// sweeps over the penalty and repeated runs reuse one assembly.
class OperatorCache {
public:
  std::shared_ptr<const Mesh> mesh_for_level(int level);
  std::shared_ptr<const Mesh> mesh_from_file(const std::filesystem::path& path);
  /// With `retain = false` a missing entry is assembled but not stored.
  std::shared_ptr<const CalderonOperators> operators(const std::shared_ptr<const Mesh>& mesh, SpaceKind space_lambda,
                                                     double k, const QuadratureConfig& quad, int threads,
                                                     bool retain = true);
  void clear();

private:
  using Key = std::tuple<const Mesh*, int, double, int, int, double>;
  std::map<int, std::shared_ptr<const Mesh>> levels_;
  std::map<std::string, std::shared_ptr<const Mesh>> files_;
  std::map<Key, std::shared_ptr<const CalderonOperators>> operators_;
};

using RowCallback = std::function<void(const ResultRow&)>;

/// Runs every grid point in a fixed order. Per-point failures are recorded in
/// the row; configuration and mesh errors are thrown before any solve.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, OperatorCache* cache = nullptr,
                                      const RowCallback& on_row = {});

inline constexpr const char* kResultsHeader =
    "experiment,k,beta_re,beta_im,h,ndofs,iterations,converged,err_u,err_lambda,time_s";

/// CSV text; `include_time = false` blanks the wall-time column for
/// byte-level comparisons.
std::string format_results(const std::vector<ResultRow>& rows, bool include_time = true);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);
std::vector<ResultRow> parse_results(const std::string& text);

/// Least-squares slope of log(err) against log(h) over rows with positive,
/// finite values. Returns NaN with fewer than two usable rows.
double fit_loglog_slope(const std::vector<ResultRow>& rows);

}  // namespace weakbem
