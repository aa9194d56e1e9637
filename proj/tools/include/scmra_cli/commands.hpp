#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scmra/config.hpp"

namespace scmra::cli {

struct ExperimentSpec {
    std::string command;  // analyze | simulate | linkbudget | sweep
    std::filesystem::path config;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    std::vector<std::string> overrides;  // key=value
    int workers = 1;
};

const std::vector<std::string>& command_names();

/// Worker count from SCMRA_WORKERS; 1 when unset.
int workers_from_env();

/// Runs one command and writes its artifacts. Throws scmra::Error on failure.
void run_command(const ExperimentSpec& spec);

/// Entry points used by run_command, exposed for tests.
void run_analyze(const SimConfig& cfg, const std::filesystem::path& out, const std::string& hash);
void run_linkbudget(const SimConfig& cfg, const std::filesystem::path& out, const std::string& hash);
void run_simulate(const SimConfig& cfg, std::uint64_t seed, int workers, const std::filesystem::path& out,
                  const std::string& hash);
void run_sweep(const SimConfig& cfg, std::uint64_t seed, int workers, const std::filesystem::path& out,
               const std::string& hash);

}  // namespace scmra::cli
