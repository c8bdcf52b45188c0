// scatterlab: experiment runner.
//
//   scatterlab run <config>
//   scatterlab verify-all --dim {2|3} --out <dir>
//   scatterlab list-experiments
//
// Exit code 0 iff every verdict row passes.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "scatterlab/harness.hpp"

namespace {

int print_summary(const scatterlab::Report& r, const std::string& where)
{
    int failed = 0;
    for (const auto& row : r.rows) failed += row.pass ? 0 : 1;
    std::printf("%-14s %-6s rows=%zu failed=%d  %s\n", r.experiment.c_str(), r.all_pass() ? "PASS" : "FAIL",
                r.rows.size(), failed, where.c_str());
    for (const auto& row : r.rows)
        if (!row.error.empty()) std::printf("    error: %s\n", row.error.c_str());
    return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"scatterlab: point-scatterer eigenfunction experiments on S^d"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run one experiment config");
    run_cmd->add_option("config", config_path, "config file (key = value lines)")->required()->check(CLI::ExistingFile);

    int dim = 2;
    std::string out_dir;
    auto* verify = app.add_subcommand("verify-all", "run the built-in experiment suite for one dimension");
    verify->add_option("--dim", dim, "sphere dimension")->required()->check(CLI::IsMember({2, 3}));
    verify->add_option("--out", out_dir, "output directory")->required();

    auto* list = app.add_subcommand("list-experiments", "print experiment kinds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& name : scatterlab::experiment_names())
                std::printf("%-14s %s\n", name.c_str(), scatterlab::experiment_anchor(name).c_str());
            return 0;
        }
        if (*run_cmd) {
            const auto cfg = scatterlab::ExperimentConfig::from_json(scatterlab::load_config_file(config_path));
            const auto report = scatterlab::run(cfg);
            std::string where;
            if (!cfg.output_path.empty()) {
                scatterlab::emit(report, cfg.output_path, cfg.output_format);
                where = cfg.output_path;
            } else {
                std::cout << scatterlab::report_csv(report);
            }
            return print_summary(report, where);
        }
        if (*verify) {
            int status = 0;
            int index = 0;
            for (const auto& j : scatterlab::verify_all_configs(dim)) {
                const auto cfg = scatterlab::ExperimentConfig::from_json(j);
                const auto report = scatterlab::run(cfg);
                const auto base = std::filesystem::path(out_dir) /
                                  (std::to_string(index++) + "_" + cfg.experiment + "_d" + std::to_string(dim));
                scatterlab::emit(report, base, "both");
                status |= print_summary(report, base.string());
            }
            return status;
        }
    } catch (const scatterlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
