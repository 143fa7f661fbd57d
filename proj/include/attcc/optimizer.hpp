// Constrained covertness-maximization solvers for the wireless-powered and
// cable-powered systems, plus an exhaustive grid oracle for verification.
#pragma once

#include <optional>
#include <string_view>

#include "attcc/analytic.hpp"
#include "attcc/config.hpp"
#include "attcc/numerics.hpp"

namespace attcc {

enum class Mode { Wpcc, WpccP1, Cpcc, CpccQhalf };

std::optional<Mode> parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

// Infeasible solutions carry zeros in every starred field.
struct WpccSolution {
    bool feasible = false;
    double p_s_star = 0.0;
    double p_star = 0.0;
    double q_star = 0.0;
    double xi_star = 0.0;
    double r_c = 0.0;
};

struct CpccSolution {
    bool feasible = false;
    double p_s_star = 0.0;
    double q_star = 0.0;
    double xi_star = 0.0;
    double r_c = 0.0;
};

struct FeasibilityCheck {
    bool feasible = false;
    double kappa1 = 0.0;  // min(mu3, P_m), watts
    double bound = 0.0;   // largest supportable R_m, bits/s/Hz
};

// R_m <= R/(1 + mu1 kappa1) exp(-lambda_sr beta / kappa1).
FeasibilityCheck wpcc_feasibility(const SystemParams& sp, const Coefficients& c,
                                  double r_m);

// Joint optimum over (P_s, p).
WpccSolution solve_wpcc(const SystemParams& sp, const Coefficients& c, double r_m,
                        const SearchOptions& opts = {});

// Optimum over P_s with the conditional transmit probability pinned at 1.
WpccSolution solve_wpcc_fixed_p1(const SystemParams& sp, const Coefficients& c,
                                 double r_m, const SearchOptions& opts = {});

// Cable-powered optimum over (P_s, q).
CpccSolution solve_cpcc(const SystemParams& sp, const Coefficients& c, double r_m,
                        const SearchOptions& opts = {});

// Cable-powered baseline with q pinned at 1/2: maximize the detection error
// over P_s subject to (R/2) exp(-lambda_sr beta / P_s) >= R_m.
CpccSolution solve_cpcc_fixed_qhalf(const SystemParams& sp, const Coefficients& c,
                                    double r_m, const SearchOptions& opts = {});

struct OracleSolution {
    bool feasible = false;
    double p_s_star = 0.0;
    double prob_star = 0.0;  // p for wpcc modes, q for cpcc modes
    double q_star = 0.0;     // resulting prior transmit probability
    double xi_star = 0.0;
    double r_c = 0.0;
};

// Exhaustive evaluation on a log-spaced P_s grid times a uniform probability
// grid, discarding points with R_c < R_m. Ties resolve to the smallest P_s,
// then the smallest probability. Deterministic.
OracleSolution grid_oracle(const SystemParams& sp, const Coefficients& c, double r_m,
                           Mode mode, int n_ps, int n_prob);

}  // namespace attcc
