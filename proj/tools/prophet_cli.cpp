// Batch front end: analyze instances, simulate rules, run certificate
// suites, and sweep deterministic thresholds. Reports are JSON with a fixed
// field order and shortest round-trip floats, so identical commands produce
// identical bytes.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prophet/commands.hpp"
#include "prophet/errors.hpp"
#include "prophet/version.hpp"

namespace {

struct Common {
    prophet::CliOptions opts;
    std::string out_path;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool needs_rule) {
    cmd->add_option("--instance", c.opts.instance_path, "instance file (JSON)")->required();
    auto* rule = cmd->add_option("--rule", c.opts.rule_path, "rule file (JSON)");
    if (needs_rule) rule->required();
    cmd->add_option("--trials", c.opts.trials, "Monte Carlo trials");
    cmd->add_option("--seed", c.opts.seed, "random seed");
    cmd->add_option("--points", c.opts.points, "grid points");
    cmd->add_option("--threads", c.opts.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--zgrid", c.opts.zgrid, "tail levels (comma separated)")->delimiter(',');
    cmd->add_option("--out", c.out_path, "output path");
    cmd->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw prophet::ParseError(out_path + ": cannot open for writing");
    out << text;
}

std::string echo_of(int argc, char** argv) {
    std::ostringstream echo;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) echo << ' ';
        echo << argv[i];
    }
    return echo.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold stopping rules and certificates for independent "
                 "nonnegative values"};
    app.require_subcommand(1);
    app.set_version_flag("--version", prophet::kVersion);

    Common analyze, simulate, certify, sweep;
    CLI::App* cmd_analyze = app.add_subcommand("analyze", "thresholds and instance tables");
    add_common(cmd_analyze, analyze, false);

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo with exact reference");
    add_common(cmd_simulate, simulate, true);

    CLI::App* cmd_certify = app.add_subcommand("certify", "run certificate checks");
    add_common(cmd_certify, certify, false);
    cmd_certify->add_option("--suite", certify.opts.suite,
                            "comma separated certificate names, or 'all'");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "deterministic threshold sweep (CSV)");
    add_common(cmd_sweep, sweep, false);
    cmd_sweep->add_option("--tau-min", sweep.opts.tau_min, "sweep start")->required();
    cmd_sweep->add_option("--tau-max", sweep.opts.tau_max, "sweep end")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*cmd_analyze) {
            analyze.opts.command_echo = echo_of(argc, argv);
            const auto outcome = prophet::run_analyze(analyze.opts);
            emit(outcome.report.dump(2) + "\n", analyze.out_path);
            return outcome.exit_code;
        }
        if (*cmd_simulate) {
            simulate.opts.command_echo = echo_of(argc, argv);
            const auto outcome = prophet::run_simulate(simulate.opts);
            emit(outcome.report.dump(2) + "\n", simulate.out_path);
            return outcome.exit_code;
        }
        if (*cmd_certify) {
            certify.opts.command_echo = echo_of(argc, argv);
            const auto outcome = prophet::run_certify(certify.opts);
            emit(outcome.report.dump(2) + "\n", certify.out_path);
            return outcome.exit_code;
        }
        if (*cmd_sweep) {
            sweep.opts.command_echo = echo_of(argc, argv);
            const auto outcome = prophet::run_sweep(sweep.opts);
            if (sweep.format == "csv" && sweep.out_path.empty()) {
                std::cout << outcome.csv;
            } else if (!sweep.out_path.empty()) {
                emit(outcome.csv, sweep.out_path);
                std::cout << outcome.report.dump(2) << "\n";
            } else {
                std::cout << outcome.report.dump(2) << "\n";
            }
            return outcome.exit_code;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return prophet::exit_code_for_exception(e);
    }
    return 0;
}
