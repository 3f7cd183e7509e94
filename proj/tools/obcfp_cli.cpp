#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "obcfp/commands.hpp"

namespace cli = obcfp::cli;

int main(int argc, char** argv) {
    CLI::App app{"Order-book market simulator with herding cascades"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::int64_t> snapshots{0, 100, 360, 1000, 20000};

    cli::RunRequest run_req;
    auto* run = app.add_subcommand("run", "Simulate one market and write its run directory");
    run->add_option("--config", config_path, "Configuration file (key = value)");
    run->add_option("--seed", seed, "Override the configured seed");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--snapshots", snapshots, "Snapshot steps, comma separated")->delimiter(',');
    run->add_flag("--dump-book", run_req.dump_book, "Write every step's ranked book (large)");
    run->add_flag("--export-network", run_req.export_network, "Write the trader network as an edge list");

    cli::EnsembleRequest ens_req;
    std::optional<std::uint64_t> base_seed;
    auto* ens = app.add_subcommand("ensemble", "Run consecutive seeds and summarise them");
    ens->add_option("--config", config_path, "Configuration file (key = value)");
    ens->add_option("--seed", base_seed, "First seed (default 1)");
    ens->add_option("--n-seeds", ens_req.n_seeds, "Number of replicas")->check(CLI::PositiveNumber);
    ens->add_option("--jobs", ens_req.jobs, "Replicas run concurrently")->check(CLI::PositiveNumber);
    ens->add_option("--out", out, "Output directory")->required();
    ens->add_option("--snapshots", snapshots, "Snapshot steps, comma separated")->delimiter(',');

    std::string run_dir;
    auto* an = app.add_subcommand("analyze", "Fit the return pdf and detect the regime transition");
    an->add_option("run_dir", run_dir, "Run directory")->required();

    std::string dir_a, dir_b, cmp_out;
    auto* cmp = app.add_subcommand("compare", "Compare two analysed runs or ensembles (B minus A)");
    cmp->add_option("dir_a", dir_a, "Baseline directory")->required();
    cmp->add_option("dir_b", dir_b, "Comparison directory")->required();
    cmp->add_option("--out", cmp_out, "Also write the comparison JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kOk : cli::kUsage;
    }

    const auto cfg = config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path);
    if (*run) {
        run_req.config_path = cfg;
        run_req.seed = seed;
        run_req.out = out;
        run_req.snapshots = snapshots;
        return cli::cmd_run(run_req, std::cout, std::cerr);
    }
    if (*ens) {
        ens_req.config_path = cfg;
        ens_req.base_seed = base_seed.value_or(1);
        ens_req.out = out;
        ens_req.snapshots = snapshots;
        return cli::cmd_ensemble(ens_req, std::cout, std::cerr);
    }
    if (*an) return cli::cmd_analyze(run_dir, std::cout, std::cerr);
    const auto cmp_file = cmp_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(cmp_out);
    return cli::cmd_compare(dir_a, dir_b, cmp_file, std::cout, std::cerr);
}
