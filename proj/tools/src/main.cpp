#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sampleahead/cli/commands.hpp"

namespace cli = sampleahead::cli;

int main(int argc, char** argv) {
    CLI::App app{"sampleahead: online classifier-sampler training"};
    app.require_subcommand(1);

    std::string run_config;
    cli::RunOverrides overrides;
    std::uint64_t seed = 0;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Run one experiment and write its output files");
    run->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = run->add_option("--seed", seed, "Override the config's seed");
    auto* out_opt = run->add_option("--out", run_out, "Output directory (overrides output.dir)");

    std::vector<std::string> configs;
    std::vector<std::uint64_t> seeds;
    std::string compare_out;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* compare = app.add_subcommand("compare", "Run configs over paired seeds and t-test the final errors");
    compare->add_option("configs", configs, "Two or more config files")->required()->expected(2, -1)->check(CLI::ExistingFile);
    compare->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
    auto* compare_out_opt = compare->add_option("--out", compare_out, "Output directory (default ./compare)");
    compare->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Write heatmap.csv and summary.txt for a run directory");
    report->add_option("dir", report_dir, "Run output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : cli::kExitConfig;
    }

    if (run->parsed()) {
        if (*seed_opt) overrides.seed = seed;
        if (*out_opt) overrides.out = run_out;
        return cli::cmd_run(run_config, overrides, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        std::vector<std::filesystem::path> paths(configs.begin(), configs.end());
        std::optional<std::filesystem::path> out;
        if (*compare_out_opt) out = compare_out;
        return cli::cmd_compare(paths, seeds, out, jobs, std::cout, std::cerr);
    }
    return cli::cmd_report(report_dir, std::cout, std::cerr);
}
