// Command-line front end: single-instance solving, parameter sweeps as CSV,
// and the Monte-Carlo verification bundle.
//
// Exit codes: 0 success, 1 usage/config error, 2 infeasible (solve only),
// 3 verification failure.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "attcc/config.hpp"
#include "attcc/sweep.hpp"
#include "attcc/verify.hpp"

namespace {

attcc::SystemParams load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw attcc::ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return attcc::load_params(text.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

attcc::Mode require_mode(const std::string& name) {
    const auto mode = attcc::parse_mode(name);
    if (!mode) {
        throw std::runtime_error("unknown mode '" + name +
                                 "' (expected wpcc, wpcc-p1, cpcc or cpcc-qhalf)");
    }
    return *mode;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covertness-maximizing design of accumulate-then-transmit systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string mode_name;
    std::string var_name = "rm";
    std::string out_path;
    double r_m = 0.0;
    double from = 0.0, to = 0.0;
    int points = 50;
    int threads = 1;
    std::uint64_t seed = 42;
    std::uint64_t n_slots = 1'000'000;
    std::uint64_t n_trials = 1'000'000;

    auto* solve = app.add_subcommand("solve", "Solve one instance, print one CSV row");
    solve->add_option("--config", config_path, "config file")->required();
    solve->add_option("--mode", mode_name, "wpcc | wpcc-p1 | cpcc | cpcc-qhalf")->required();
    solve->add_option("--rm", r_m, "minimum effective covert rate, bits/s/Hz")->required();

    auto* sweep = app.add_subcommand("sweep", "Sweep R_m or P_r, write a CSV file");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--mode", mode_name, "wpcc | wpcc-p1 | cpcc | cpcc-qhalf")->required();
    sweep->add_option("--var", var_name, "rm | pr")->required();
    sweep->add_option("--from", from, "sweep start (R_m linear, P_r in dBm)")->required();
    sweep->add_option("--to", to, "sweep end")->required();
    sweep->add_option("--points", points, "grid points (>= 2)")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--rm", r_m, "fixed R_m for pr sweeps");
    sweep->add_option("--threads", threads, "worker threads");

    auto* verify = app.add_subcommand("verify", "Run all Monte-Carlo and oracle checks");
    verify->add_option("--config", config_path, "config file")->required();
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--slots", n_slots, "slots per protocol simulation");
    verify->add_option("--trials", n_trials, "trials per detection/outage estimate");
    verify->add_option("--out", out_path, "report CSV path (default: stdout)");
    verify->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const attcc::SystemParams params = load_config_file(config_path);

        if (solve->parsed()) {
            const auto rec = attcc::solve_record(params, require_mode(mode_name), r_m);
            std::cout << attcc::render_row(rec) << "\n";
            return rec.feasible ? 0 : 2;
        }

        if (sweep->parsed()) {
            attcc::SweepSpec spec;
            spec.mode = require_mode(mode_name);
            if (var_name == "rm") {
                spec.var = attcc::SweepVar::Rm;
            } else if (var_name == "pr") {
                spec.var = attcc::SweepVar::Pr;
            } else {
                throw std::runtime_error("unknown sweep variable '" + var_name + "'");
            }
            spec.from = from;
            spec.to = to;
            spec.points = points;
            spec.r_m = r_m;
            const auto records = attcc::run_sweep(params, spec, threads);
            write_file(out_path, attcc::render_csv(records));
            return 0;
        }

        // verify
        attcc::VerifyOptions opts;
        opts.seed = seed;
        opts.n_slots = n_slots;
        opts.n_trials = n_trials;
        opts.threads = threads;
        const auto report = attcc::run_verification(params, opts);
        const std::string csv = attcc::render_csv(report);
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            write_file(out_path, csv);
        }
        if (!report.all_passed()) {
            std::cerr << "failed checks:";
            for (const auto& name : report.failing()) std::cerr << ' ' << name;
            std::cerr << "\n";
            return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
