#pragma once

// The four user-facing commands. Each returns a process exit code and reports
// problems on the supplied error stream instead of throwing.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "obcfp/analysis.hpp"
#include "obcfp/config.hpp"
#include "obcfp/engine.hpp"

namespace obcfp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kRuntimeError = 3 };

inline constexpr int kFormatVersion = 1;

struct RunRequest {
    std::optional<std::filesystem::path> config_path;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out;
    std::vector<std::int64_t> snapshots{0, 100, 360, 1000, 20000};
    bool dump_book = false;
    bool export_network = false;
};

struct EnsembleRequest {
    std::optional<std::filesystem::path> config_path;
    std::uint64_t base_seed = 1;
    std::uint32_t n_seeds = 8;
    std::filesystem::path out;
    unsigned jobs = 1;
    std::vector<std::int64_t> snapshots{0, 100, 360, 1000, 20000};
};

/// Resolves the config file (defaults when absent) and applies the seed override.
ModelConfig resolve_config(const std::optional<std::filesystem::path>& path,
                           std::optional<std::uint64_t> seed);

/// Runs one simulation and publishes its directory in a single rename. An
/// existing `out` is replaced only if it is empty or a previous run directory.
RunResult run_to_directory(const ModelConfig& config, const RunRequest& request);

int cmd_run(const RunRequest& request, std::ostream& log, std::ostream& err);
int cmd_ensemble(const EnsembleRequest& request, std::ostream& log, std::ostream& err);
int cmd_analyze(const std::filesystem::path& run_dir, std::ostream& log, std::ostream& err);

/// Compares two directories holding analysis.json or ensemble_summary.json.
/// Prints the comparison JSON on `log` and also writes it to `out_file` if set.
int cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                const std::optional<std::filesystem::path>& out_file, std::ostream& log,
                std::ostream& err);

}  // namespace obcfp::cli
