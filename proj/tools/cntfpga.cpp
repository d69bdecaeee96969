#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cntfpga/experiments.hpp"

using namespace cntfpga;

namespace {

struct Overrides {
    std::string config_path;
    uint64_t seed = 0;
    int samples = 0;
    std::string out_dir;
    std::string experiment;
    int workers = 0;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* experiment_opt = nullptr;
    CLI::Option* workers_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (defaults used if absent)");
        seed_opt = cmd->add_option("--seed", seed, "Override master_seed");
        samples_opt = cmd->add_option("--samples", samples, "Override sample count");
        out_opt = cmd->add_option("--out", out_dir, "Override output directory");
        experiment_opt = cmd->add_option("--experiment", experiment,
                                         "delay | ro-test | clb-test | array-test | inject | repair");
        workers_opt = cmd->add_option("--workers", workers, "Worker thread count");
    }

    // Returns false (after printing diagnostics) when the config does not load
    // or does not validate.
    bool resolve(RunConfig& cfg) const {
        try {
            cfg = config_path.empty() ? default_config() : load_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return false;
        }
        if (seed_opt->count()) cfg.master_seed = seed;
        if (samples_opt->count()) cfg.samples = samples;
        if (out_opt->count()) cfg.output_dir = out_dir;
        if (experiment_opt->count()) cfg.experiment = experiment;
        if (workers_opt->count()) cfg.workers = workers;
        const auto errors = validate_config(cfg);
        for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
        return errors.empty();
    }
};

void print_scheme_table() {
    std::printf("%-7s %-16s %-17s %-14s %s\n", "scheme", "tiles_per_group", "spares_per_group",
                "rows_per_tile", "normalized_overhead_pct");
    for (const SharingScheme& s : sharing_schemes())
        std::printf("%-7d %-16d %-17d %-14.4f %.1f\n", s.id, s.tiles_per_group,
                    s.spares_per_group, scheme_rows_per_tile(s), scheme_overhead_pct(s));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for CNT-based FPGA interconnect, logic test, and repair studies"};
    app.require_subcommand(1);

    Overrides run_over, val_over;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write CSV/JSON outputs");
    run_over.attach(run_cmd);
    CLI::App* val_cmd = app.add_subcommand("validate", "Check a config and print diagnostics");
    val_over.attach(val_cmd);
    app.add_subcommand("schemes", "Print the spare-row sharing scheme table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand("schemes")) {
        print_scheme_table();
        return 0;
    }

    if (app.got_subcommand("validate")) {
        RunConfig cfg;
        if (!val_over.resolve(cfg)) return 2;
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(config_hash(cfg)));
        std::cout << "config ok: experiment=" << cfg.experiment << " samples=" << cfg.samples
                  << " seed=" << cfg.master_seed << " hash=" << hex << "\n";
        return 0;
    }

    RunConfig cfg;
    if (!run_over.resolve(cfg)) return 2;
    try {
        const auto files = run_experiment(cfg);
        for (const std::string& f : files) std::cout << cfg.output_dir << "/" << f << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
