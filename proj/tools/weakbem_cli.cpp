// Experiment driver: one subcommand per experiment kind, results as CSV.

#include "weakbem/error.hpp"
#include "weakbem/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;

struct FlagSpec {
  const char* name;
  const char* help;
};

// Every config-file key doubles as a flag of the same name.
constexpr FlagSpec kFlags[] = {
    {"k", "wavenumber"},
    {"k-min", "first wavenumber of the k grid"},
    {"k-max", "last wavenumber of the k grid"},
    {"k-step", "k grid spacing"},
    {"beta-re", "real part of the penalty (missing part defaults to 0)"},
    {"beta-im", "imaginary part of the penalty (missing part defaults to 0)"},
    {"beta-scaling", "constant | inverse-h"},
    {"beta-min", "smallest penalty magnitude of a beta sweep"},
    {"beta-max", "largest penalty magnitude of a beta sweep"},
    {"beta-per-decade", "beta sweep points per decade"},
    {"level", "icosphere refinement level"},
    {"h-target", "pick the coarsest icosphere with h_max <= target"},
    {"levels", "comma separated refinement levels (converge)"},
    {"mesh", "triangle mesh file (nv nt / xyz / ijk)"},
    {"space", "product space, u:p1,l:p1 or u:p1,l:dp0"},
    {"quad-order", "regular triangle quadrature order"},
    {"singular-order", "Gauss points per direction of the singular rules"},
    {"near-field-ratio", "centroid distance / diameter below which the regular order doubles"},
    {"gmres-tol", "relative preconditioned residual tolerance"},
    {"maxiter", "GMRES iteration cap"},
    {"threads", "assembly threads"},
    {"out", "CSV output path (stdout when omitted)"},
};

struct Subcommand {
  weakbem::ExperimentKind kind;
  const char* help;
};

constexpr Subcommand kSubcommands[] = {
    {weakbem::ExperimentKind::solve, "single solve"},
    {weakbem::ExperimentKind::sweep_k, "sweep over a wavenumber grid"},
    {weakbem::ExperimentKind::sweep_beta_real, "sweep over real penalties"},
    {weakbem::ExperimentKind::sweep_beta_imag, "sweep over Im(beta) with Re(beta) = 1"},
    {weakbem::ExperimentKind::converge, "mesh refinement study"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-penalty Calderon BEM for the exterior Helmholtz Dirichlet problem"};
  app.require_subcommand(1);

  std::map<std::string, std::optional<std::string>> values;
  std::optional<std::string> config_path;
  std::vector<std::pair<CLI::App*, weakbem::ExperimentKind>> commands;
  for (const Subcommand& sc : kSubcommands) {
    CLI::App* sub = app.add_subcommand(weakbem::to_string(sc.kind), sc.help);
    sub->add_option("--config", config_path, "flat key = value file; flags override its entries");
    for (const FlagSpec& f : kFlags) {
      sub->add_option(std::string("--") + f.name, values[f.name], f.help);
    }
    commands.emplace_back(sub, sc.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  weakbem::ExperimentConfig config;
  std::vector<weakbem::ResultRow> rows;
  try {
    if (config_path) {
      config = weakbem::parse_config_file(*config_path);
    }
    for (const auto& [sub, kind] : commands) {
      if (sub->parsed()) {
        config.kind = kind;
      }
    }
    for (const FlagSpec& f : kFlags) {
      if (const auto& v = values[f.name]) {
        weakbem::apply_config_value(config, f.name, *v);
      }
    }
    config.validate();
    rows = weakbem::run_experiment(config, nullptr, [](const weakbem::ResultRow& r) {
      std::fprintf(stderr, "k=%.6g beta=(%.6g,%.6g) h=%.4g iterations=%d converged=%d err_lambda=%.4g%s%s\n",
                   r.k, r.beta_re, r.beta_im, r.h, r.iterations, r.converged ? 1 : 0, r.err_lambda,
                   r.failure.empty() ? "" : " : ", r.failure.c_str());
    });
  } catch (const weakbem::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const weakbem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (config.out) {
      weakbem::write_results(rows, *config.out);
    } else {
      std::cout << weakbem::format_results(rows);
    }
  } catch (const weakbem::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (const auto& r : rows) {
    if (!r.converged) {
      return kExitNotConverged;
    }
  }
  return kExitOk;
}
