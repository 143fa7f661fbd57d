// Closed-form expressions: prior transmit probability, outage, effective
// covert rate, the warden's detection error for any threshold, and the
// objective/constraint helpers used by the covertness solvers.
#pragma once

#include "attcc/config.hpp"

namespace attcc {

// False alarm, missed detection and total error for one threshold choice.
struct DetectionOutcome {
    double p_fa;
    double p_md;
    double xi;

    // xi = (1-q) p_fa + q p_md by construction.
    static DetectionOutcome make(double p_fa, double p_md, double q);
};

// q = 1 / (1 + (1-p)/p^2 + mu1 P_s). Throws std::domain_error unless p in (0,1].
double prior_transmit_probability(double p, double p_s, const Coefficients& c);

// P_out = 1 - exp(-lambda_sr beta / P_s).
double outage_probability(double p_s, const SystemParams& sp, const Coefficients& c);

// R_c = q R exp(-lambda_sr beta / P_s).
double effective_covert_rate(double q, double p_s, const SystemParams& sp,
                             const Coefficients& c);

// Piecewise in tau against sigma_w^2 and sigma_w^2 + P_s |h_sw|^2; tau may be
// +infinity (never-exceeded threshold).
DetectionOutcome detection_error(double tau, double q, double p_s,
                                 const SystemParams& sp, const Coefficients& c);

// +infinity when q <= 1/(1+e^{mu2 P_s}) (ties included), else the power edge
// sigma_w^2 + P_s |h_sw|^2.
double optimal_threshold(double q, double p_s, const SystemParams& sp,
                         const Coefficients& c);

// Detection error at the optimal threshold; always in [0, 1/2].
double min_detection_error(double q, double p_s, const SystemParams& sp,
                           const Coefficients& c);

// Smallest q that meets the rate constraint at this power,
// (R_m/R) exp(lambda_sr beta / P_s), evaluated in log space and clamped to 1
// when the exponent is nonnegative (only happens outside the feasible range).
double required_prior_q(double p_s, const SystemParams& sp, const Coefficients& c,
                        double r_m);

// q at which the detection error peaks: 1/(1 + e^{mu2 P_s}).
double peak_detection_q(double p_s, const Coefficients& c);

// Largest reachable prior in the wireless-powered system (p=1): 1/(1 + mu1 P_s).
double max_prior_q(double p_s, const Coefficients& c);

// f1 = R/(1+mu1 P_s) exp(-lambda_sr beta/P_s) - R_m; unimodal with peak at mu3.
double wpcc_margin_f1(double p_s, const SystemParams& sp, const Coefficients& c,
                      double r_m);

// Best detection error reachable at this power over admissible p.
double wpcc_objective_f2(double p_s, const SystemParams& sp, const Coefficients& c,
                         double r_m);

// Best detection error reachable at this power over q in (0,1].
double cpcc_objective_f5(double p_s, const SystemParams& sp, const Coefficients& c,
                         double r_m);

}  // namespace attcc
