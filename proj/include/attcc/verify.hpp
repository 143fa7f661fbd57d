// The verification bundle behind `attcc verify`: Monte-Carlo oracles for the
// closed forms plus solver-vs-grid-oracle consistency, reported as one
// machine-readable CSV row per check.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attcc/config.hpp"

namespace attcc {

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::uint64_t n_slots = 1'000'000;
    std::uint64_t n_trials = 1'000'000;
    int tau_points = 201;
    int threads = 1;
    double r_m = 0.5;  // instance for the solver-vs-oracle checks
};

struct VerifyCheck {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    int status = 0;  // 1 pass, 0 fail, -1 skipped (under-powered)
};

struct VerificationReport {
    std::vector<VerifyCheck> checks;

    bool all_passed() const;
    std::vector<std::string> failing() const;
};

VerificationReport run_verification(const SystemParams& sp, const VerifyOptions& opts);

std::string render_csv(const VerificationReport& report);

}  // namespace attcc
