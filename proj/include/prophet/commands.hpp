#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prophet/io.hpp"
#include "prophet/version.hpp"

namespace prophet {

// Options shared by the batch commands; an unset rule path is empty.
struct CliOptions {
    std::string instance_path;
    std::string rule_path;
    std::uint64_t trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    int points = 0;  // 0 means the per-command default
    int threads = 1;
    double tau_min = 0;
    double tau_max = 0;
    std::vector<double> zgrid;
    std::string suite = "all";
    std::string command_echo;
};

struct CommandOutcome {
    Json report;
    std::string csv;  // sweep only
    int exit_code = 0;
};

// Exit codes: 0 all passed, 1 certificate failure, 2 input error,
// 3 numeric error. Input and numeric errors surface as exceptions
// (ParseError / std::invalid_argument / std::domain_error map to 2,
// NumericError and the engine limit errors map to 3); the CLI wrapper
// translates them.
CommandOutcome run_analyze(const CliOptions& opts);
CommandOutcome run_simulate(const CliOptions& opts);
CommandOutcome run_certify(const CliOptions& opts);
CommandOutcome run_sweep(const CliOptions& opts);

int exit_code_for_exception(const std::exception& e);

}  // namespace prophet
