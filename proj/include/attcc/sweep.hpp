// Parameter sweeps rendered as CSV: one row per grid point, infeasible rows
// emitted with zeros so curves visibly drop to zero.
#pragma once

#include <string>
#include <vector>

#include "attcc/config.hpp"
#include "attcc/optimizer.hpp"

namespace attcc {

struct SweepRecord {
    std::string sweep_var;  // "rm" or "pr"
    double value = 0.0;     // R_m in bits/s/Hz or P_r in dBm
    Mode mode = Mode::Wpcc;
    bool feasible = false;
    double ps_star_dbm = 0.0;
    double prob_star = 0.0;  // p* for wpcc modes, q* for cpcc modes
    double xi_star = 0.0;
    double r_c = 0.0;
};

enum class SweepVar { Rm, Pr };

struct SweepSpec {
    Mode mode = Mode::Wpcc;
    SweepVar var = SweepVar::Rm;
    double from = 0.0;
    double to = 0.0;
    int points = 2;
    double r_m = 0.0;  // fixed R_m for pr sweeps
};

// Solves one instance and shapes it as a record (sweep_var "rm", value r_m).
SweepRecord solve_record(const SystemParams& sp, Mode mode, double r_m);

// Uniform grid (R_m linear, P_r in dBm), rows in ascending grid order. Sweep
// points are independent and may be computed in parallel; the output order is
// fixed by the grid.
std::vector<SweepRecord> run_sweep(const SystemParams& sp, const SweepSpec& spec,
                                   int threads = 1);

std::string sweep_csv_header();
std::string render_csv(const std::vector<SweepRecord>& records);
std::string render_row(const SweepRecord& record);

// Shortest representation with 10 significant digits.
std::string format_number(double v);

}  // namespace attcc
