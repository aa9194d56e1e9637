#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scmra/error.hpp"
#include "scmra_cli/artifacts.hpp"
#include "scmra_cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Self-conjugating metasurface random access simulator"};
    app.require_subcommand(1);

    scmra::cli::ExperimentSpec spec;
    std::string config;
    std::string out;
    const std::vector<std::pair<std::string, std::string>> help{
        {"analyze", "SNR recursion trajectories and fixed points"},
        {"simulate", "Monte Carlo PER and setup time over offered traffic"},
        {"linkbudget", "free-space budget against the generated LOS channel"},
        {"sweep", "PER over values of one config key"},
    };
    for (const auto& [name, text] : help) {
        auto* sub = app.add_subcommand(name, text);
        sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", spec.seed, "64-bit seed")->required();
        sub->add_option("--out", out, "output directory")->required();
        sub->add_option("--set", spec.overrides, "override key=value (repeatable)");
    }
    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "check that every artifact matches its manifest");
    verify->add_option("--out", verify_dir, "output directory to check")->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            const auto rep = scmra::cli::verify_directory(verify_dir);
            for (const auto& p : rep.problems) std::cerr << "verify: " << p << "\n";
            std::cout << (rep.ok ? "OK" : "FAILED") << " (" << rep.files_checked << " files checked)\n";
            return rep.ok ? 0 : 1;
        }
        spec.command = app.get_subcommands().front()->get_name();
        spec.config = config;
        spec.out = out;
        spec.workers = scmra::cli::workers_from_env();
        scmra::cli::run_command(spec);
    } catch (const std::exception& e) {
        std::cerr << "scmra: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
