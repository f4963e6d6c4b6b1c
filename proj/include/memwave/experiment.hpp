#pragma once

// JSON experiment configs, the subcommand runner and the report writers used by
// the memwave command line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "memwave/hum.hpp"
#include "memwave/ingham.hpp"
#include "memwave/modes.hpp"

namespace memwave {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;

struct GridConfig {
    std::size_t nx = 800;              // interior FD nodes
    std::size_t time_intervals = 4096; // trace / control grid
    double cfl = 0.5;
};

struct SpectrumConfig {
    int modes = 64;
};

struct SolutionConfig {
    std::vector<double> snapshots;  // times; empty means {0, T/4, T/2, 3T/4, T}
    std::size_t x_samples = 129;    // including both endpoints
};

struct InghamConfig {
    int N = 24;
    double T = 8.0;
    int trials = 50;
    std::uint64_t seed = 20240601;
    std::string law = "standard";  // "standard" or "second_component"
    std::vector<double> sweep_T;   // ratio-vs-T curve; empty skips it
    double eps = 0.01;             // for the analytic lower bound constant
};

struct ControlConfig {
    TargetState target;
    double regularization = 0.0;
    double max_condition = 1e12;
    double tolerance = 0.05;
    double T_below = 4.0;  // below-threshold comparison run for verify-all
};

struct ExperimentConfig {
    Parameters params{0.3, 1.0, 0.1, 0.1};
    int N = 12;
    double T = 8.0;
    GridConfig grid;
    SpectrumConfig spectrum;
    std::vector<ModeData> initial_data;  // modes 1..N, zero when absent
    SolutionConfig solution;
    InghamConfig ingham;
    ControlConfig control;
    std::string output_dir = "out";
};

/// Every violated requirement of a config, reported together.
class ConfigError : public InvalidArgument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Parses and validates. params, N and T are required; every other block has
/// defaults. Throws ConfigError listing all problems.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical (sorted-key) dump of the config JSON.
std::uint64_t config_hash(const nlohmann::json& j);
std::string format_hash(std::uint64_t h);

/// Output directory plus the hash stamped into every file header.
class ReportWriter {
public:
    ReportWriter(std::filesystem::path dir, std::uint64_t hash);

    const std::filesystem::path& dir() const { return dir_; }
    std::uint64_t hash() const { return hash_; }

    /// CSV with a "# config_hash" comment line and a header row.
    void csv(const std::string& name, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) const;
    /// Whitespace separated columns for gnuplot; blank lines split data blocks.
    void plot(const std::string& name, const std::string& comment,
              const std::vector<std::vector<std::vector<double>>>& blocks) const;
    /// JSON document; the hash is stored under "config_hash".
    void json(const std::string& name, nlohmann::json doc) const;

private:
    std::filesystem::path dir_;
    std::uint64_t hash_;
};

/// %.17g
std::string format_double(double v);

enum class Subcommand { Spectrum, Modes, Solution, Ingham, Control, Simulate, VerifyAll };

std::optional<Subcommand> parse_subcommand(const std::string& name);
std::string subcommand_name(Subcommand s);

void run_spectrum(const ExperimentConfig& cfg, const ReportWriter& out);
void run_modes(const ExperimentConfig& cfg, const ReportWriter& out);
void run_solution(const ExperimentConfig& cfg, const ReportWriter& out);
void run_ingham(const ExperimentConfig& cfg, const ReportWriter& out);
void run_control(const ExperimentConfig& cfg, const ReportWriter& out);
void run_simulate(const ExperimentConfig& cfg, const ReportWriter& out);
/// Returns true when every acceptance criterion passed.
bool run_verify_all(const ExperimentConfig& cfg, const ReportWriter& out);

struct RunOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

/// Loads the config, applies the overrides and runs one subcommand. Exit codes:
/// 0 success, 1 error (error.json is written when possible), 2 failed criteria.
int run(Subcommand sub, const RunOptions& options);

}  // namespace memwave
