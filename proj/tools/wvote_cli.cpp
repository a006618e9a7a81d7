#include <iostream>

#include "CLI11.hpp"
#include "wvote/experiment.hpp"
#include "wvote/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Weighted voting under no-regret learning: simulate episodes and verify identities"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    auto* simulate = app.add_subcommand("simulate", "Run an experiment config; writes a trace CSV and a summary JSON");
    simulate->add_option("--config", config_path, "Experiment config (JSON)")->required();
    simulate->add_option("--out-dir", out_dir, "Directory for the output files");

    std::string suite;
    wvote::VerifyOptions options;
    auto* verify = app.add_subcommand("verify", "Run oracle and invariant checks");
    verify->add_option("--suite", suite, "identities | estimators | adversaries | all")->required();
    verify->add_option("--seed", options.seed, "Random seed");
    verify->add_option("--profiles", options.profiles, "Random instances per identity check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*simulate) return wvote::run_simulate(config_path, out_dir, std::cout, std::cerr);
    return wvote::run_verify(suite, options, std::cout, std::cerr);
}
