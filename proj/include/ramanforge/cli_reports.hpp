#pragma once

// Report generators behind the command-line front end: the conversion-method
// table, the dispersive-element requirement table, the AM-efficiency curve of
// the dispersive scheme, and config-driven simulation runs that emit CSV data
// plus a JSON summary.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ramanforge/conversion_methods.hpp"

namespace ramanforge::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2, kExitNumeric = 3 };

// Maps an exception to the process exit code: configuration and JSON errors
// give 1, file errors give 2, everything else gives 3.
int exit_code_for(const std::exception& error);

// RAMANFORGE_OUT_DIR when set and non-empty, otherwise the working directory.
std::filesystem::path default_output_root();

struct TableS1Options {
    double beta_max = 2.0 * std::numbers::pi;
    double dispersive_alpha = 0.76;  // rad
    double sweep_step = 0.01;        // rad, grid of the companion sweep file
};

struct TableS1Row {
    std::string method;
    double beta_star = 0.0;
    conversion::MethodReport report;
};

// One optimized row per method in table order, then dispersive_joint, the
// dispersive scheme optimized over alpha as well (beta limited to min(beta_max, pi)).
std::vector<TableS1Row> table_s1_rows(const TableS1Options& options = {});

// Writes table_s1.csv (method,beta_star,T,eta,C), table_s1_sweep.csv
// (method,beta,alpha,T,eta,C) and table_s1_dispersive.csv. Returns the paths.
std::vector<std::filesystem::path> cmd_table_s1(const std::filesystem::path& out_dir,
                                                const TableS1Options& options = {});

// Writes fig1e.csv (label,gdd_fs2,alpha_rad,required_beta_rad,reachable) for
// the default dispersive setups.
std::vector<std::filesystem::path> cmd_fig1e(const std::filesystem::path& out_dir,
                                             double qubit_frequency = 2.0 * std::numbers::pi * 6.8e9);

// beta_k = k pi / points for k = 1..points.
std::vector<double> fig2b_grid(int points);

// AM efficiency of a phase-modulated comb after the quadratic phase alpha n^2,
// evaluated on the spectrum. Throws ConfigurationError for betas outside (0, pi]
// or alpha outside (0, pi).
std::vector<double> fig2b_curve(std::span<const double> betas, double alpha);

// Writes fig2b.csv (beta,am_efficiency).
std::vector<std::filesystem::path> cmd_fig2b(const std::filesystem::path& out_dir, double alpha = 0.73,
                                             int points = 315);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> shots;
    std::optional<std::filesystem::path> out_dir;
};

struct RunOutput {
    nlohmann::ordered_json summary;
    std::vector<std::filesystem::path> files;  // CSV files, summary, then metadata
};

// Reads a JSON document. Throws IoError if unreadable, ConfigurationError if malformed.
nlohmann::json load_config(const std::filesystem::path& path);

// Validates the config (unknown keys and bad values throw ConfigurationError
// naming the field path) and runs the configured simulation.
RunOutput run_experiment(const nlohmann::json& config, const RunOverrides& overrides = {});

// Canonical text of a summary as written to disk.
std::string summary_text(const nlohmann::ordered_json& summary);

}  // namespace ramanforge::cli
