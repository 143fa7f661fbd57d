#include "attcc/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace attcc {

DetectionOutcome DetectionOutcome::make(double p_fa, double p_md, double q) {
    return DetectionOutcome{p_fa, p_md, (1.0 - q) * p_fa + q * p_md};
}

double prior_transmit_probability(double p, double p_s, const Coefficients& c) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::domain_error("prior_transmit_probability: p must be in (0,1]");
    }
    return 1.0 / (1.0 + (1.0 - p) / (p * p) + c.mu1 * p_s);
}

double outage_probability(double p_s, const SystemParams& sp, const Coefficients& c) {
    return -std::expm1(-sp.lambda_sr * c.beta / p_s);
}

double effective_covert_rate(double q, double p_s, const SystemParams& sp,
                             const Coefficients& c) {
    return q * sp.rate * std::exp(-sp.lambda_sr * c.beta / p_s);
}

DetectionOutcome detection_error(double tau, double q, double p_s,
                                 const SystemParams& sp, const Coefficients& c) {
    (void)c;
    if (std::isinf(tau)) {
        return DetectionOutcome::make(0.0, 1.0, q);  // threshold never exceeded
    }
    const double sw2 = sp.sigma2_w;
    if (tau <= sw2) {
        return DetectionOutcome::make(1.0, 0.0, q);
    }
    const double p_fa = std::exp(-sp.lambda_rw * (tau - sw2) / sp.p_r);
    const double edge = sw2 + p_s * sp.h_sw_gain;
    if (tau <= edge) {
        return DetectionOutcome::make(p_fa, 0.0, q);
    }
    const double p_md = -std::expm1(-sp.lambda_rw * (tau - edge) / sp.p_r);
    return DetectionOutcome::make(p_fa, p_md, q);
}

double optimal_threshold(double q, double p_s, const SystemParams& sp,
                         const Coefficients& c) {
    if (q <= peak_detection_q(p_s, c)) {
        return std::numeric_limits<double>::infinity();
    }
    return sp.sigma2_w + p_s * sp.h_sw_gain;
}

double min_detection_error(double q, double p_s, const SystemParams& sp,
                           const Coefficients& c) {
    return detection_error(optimal_threshold(q, p_s, sp, c), q, p_s, sp, c).xi;
}

double required_prior_q(double p_s, const SystemParams& sp, const Coefficients& c,
                        double r_m) {
    if (r_m <= 0.0) return 0.0;
    const double log_q = std::log(r_m / sp.rate) + sp.lambda_sr * c.beta / p_s;
    return (log_q >= 0.0) ? 1.0 : std::exp(log_q);
}

double peak_detection_q(double p_s, const Coefficients& c) {
    return 1.0 / (1.0 + std::exp(c.mu2 * p_s));
}

double max_prior_q(double p_s, const Coefficients& c) {
    return 1.0 / (1.0 + c.mu1 * p_s);
}

double wpcc_margin_f1(double p_s, const SystemParams& sp, const Coefficients& c,
                      double r_m) {
    return sp.rate / (1.0 + c.mu1 * p_s) * std::exp(-sp.lambda_sr * c.beta / p_s) - r_m;
}

double wpcc_objective_f2(double p_s, const SystemParams& sp, const Coefficients& c,
                         double r_m) {
    const double exp_mu2 = std::exp(c.mu2 * p_s);
    if (c.mu1 * p_s > exp_mu2) {
        // Detection error is increasing in q here, so the p=1 cap is optimal.
        return max_prior_q(p_s, c);
    }
    const double f3 = std::max(required_prior_q(p_s, sp, c, r_m),
                               1.0 / (1.0 + exp_mu2));
    return (1.0 - f3) * std::exp(-c.mu2 * p_s);
}

double cpcc_objective_f5(double p_s, const SystemParams& sp, const Coefficients& c,
                         double r_m) {
    const double f6 = required_prior_q(p_s, sp, c, r_m);
    const double f7 = peak_detection_q(p_s, c);
    if (f6 >= f7) {
        return (1.0 - f6) * std::exp(-c.mu2 * p_s);
    }
    return f7;
}

}  // namespace attcc
