#include "attcc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace attcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEpsPower = 1e-12;  // watts; lower edge for open power intervals

// Conditional transmit probability p with (1-p)/p^2 = theta, i.e. the p that
// reaches a target prior q with 1/q - 1 - mu1 P_s = theta. The algebraic form
// 2/(sqrt(1+4 theta)+1) is exact at theta = 0 (p = 1) and stable as
// theta -> infinity (p -> 0), so no equality guards are needed.
double p_from_theta(double theta) {
    if (theta <= 0.0) return 1.0;
    return std::min(1.0, 2.0 / (std::sqrt(1.0 + 4.0 * theta) + 1.0));
}

// Roots s1 <= s2 of the p=1 rate margin around its peak mu3. Under the
// feasibility condition f1(mu3) >= 0 always holds. s2 may be +infinity when
// no sign change is found below 1e6 P_m (clamped by P_m later).
std::pair<double, double> rate_interval(const SystemParams& sp, const Coefficients& c,
                                        double r_m) {
    auto f1 = [&](double x) { return wpcc_margin_f1(x, sp, c, r_m); };
    double s1 = kEpsPower;
    if (f1(kEpsPower) < 0.0) {
        s1 = find_root(f1, kEpsPower, c.mu3, 1e-13);
    }
    double s2 = kInf;
    const double cap = 1e6 * sp.p_max;
    double lo = c.mu3;
    double hi = 2.0 * c.mu3;
    while (hi <= cap) {
        if (f1(hi) < 0.0) {
            s2 = find_root(f1, lo, hi, 1e-13);
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    return {s1, s2};
}

}  // namespace

std::optional<Mode> parse_mode(std::string_view name) {
    if (name == "wpcc") return Mode::Wpcc;
    if (name == "wpcc-p1") return Mode::WpccP1;
    if (name == "cpcc") return Mode::Cpcc;
    if (name == "cpcc-qhalf") return Mode::CpccQhalf;
    return std::nullopt;
}

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::Wpcc: return "wpcc";
        case Mode::WpccP1: return "wpcc-p1";
        case Mode::Cpcc: return "cpcc";
        case Mode::CpccQhalf: return "cpcc-qhalf";
    }
    return "unknown";
}

FeasibilityCheck wpcc_feasibility(const SystemParams& sp, const Coefficients& c,
                                  double r_m) {
    if (r_m < 0.0) throw std::domain_error("wpcc_feasibility: r_m must be >= 0");
    FeasibilityCheck out;
    out.kappa1 = std::min(c.mu3, sp.p_max);
    out.bound = sp.rate / (1.0 + c.mu1 * out.kappa1) *
                std::exp(-sp.lambda_sr * c.beta / out.kappa1);
    out.feasible = r_m <= out.bound;
    return out;
}

WpccSolution solve_wpcc(const SystemParams& sp, const Coefficients& c, double r_m,
                        const SearchOptions& opts) {
    WpccSolution out;
    if (!wpcc_feasibility(sp, c, r_m).feasible) return out;

    const auto [s1, s2] = rate_interval(sp, c, r_m);
    // Half-open (s1, ...]: the objective is evaluated only where the rate
    // constraint strictly holds.
    const double lo = s1 * (1.0 + 1e-9);
    const double hi = std::min(s2, sp.p_max);
    auto f2 = [&](double x) { return wpcc_objective_f2(x, sp, c, r_m); };
    const double ps = (lo < hi) ? maximize_on_interval(f2, lo, hi, opts).arg : hi;

    const double theta1 = std::exp(c.mu2 * ps) - c.mu1 * ps;
    double p_star = 1.0;
    if (theta1 >= 0.0) {
        // kappa2 hits the detection-error peak, kappa3 makes the rate
        // constraint tight; the larger one is admissible for both.
        const double theta2 =
            (r_m > 0.0)
                ? sp.rate / r_m * std::exp(-sp.lambda_sr * c.beta / ps) - c.mu1 * ps - 1.0
                : kInf;
        p_star = std::max(p_from_theta(theta1), p_from_theta(theta2));
    }

    out.feasible = true;
    out.p_s_star = ps;
    out.p_star = p_star;
    out.q_star = prior_transmit_probability(p_star, ps, c);
    out.xi_star = min_detection_error(out.q_star, ps, sp, c);
    out.r_c = effective_covert_rate(out.q_star, ps, sp, c);
    return out;
}

WpccSolution solve_wpcc_fixed_p1(const SystemParams& sp, const Coefficients& c,
                                 double r_m, const SearchOptions& opts) {
    (void)opts;
    WpccSolution out;
    if (!wpcc_feasibility(sp, c, r_m).feasible) return out;

    const auto [s1, s2] = rate_interval(sp, c, r_m);
    const double ratio = c.mu1 / c.mu2;
    double kappa4;
    if (ratio <= std::exp(1.0)) {
        kappa4 = (std::sqrt(1.0 + 4.0 * ratio) - 1.0) / (2.0 * c.mu1);
    } else {
        kappa4 = -lambert_w0(-c.mu2 / c.mu1) / c.mu2;
    }
    const double ps = std::min(std::max(s1, kappa4), std::min(s2, sp.p_max));

    out.feasible = true;
    out.p_s_star = ps;
    out.p_star = 1.0;
    out.q_star = prior_transmit_probability(1.0, ps, c);
    out.xi_star = min_detection_error(out.q_star, ps, sp, c);
    out.r_c = effective_covert_rate(out.q_star, ps, sp, c);
    return out;
}

CpccSolution solve_cpcc(const SystemParams& sp, const Coefficients& c, double r_m,
                        const SearchOptions& opts) {
    CpccSolution out;
    const double a = sp.lambda_sr * c.beta;
    if (r_m > sp.rate * std::exp(-a / sp.p_max)) return out;

    const double kappa5 =
        (r_m > 0.0) ? a / (std::log(sp.rate) - std::log(r_m)) : kEpsPower;
    const double lo = std::max(kappa5, kEpsPower);
    auto f5 = [&](double x) { return cpcc_objective_f5(x, sp, c, r_m); };
    const double ps = (lo < sp.p_max) ? maximize_on_interval(f5, lo, sp.p_max, opts).arg
                                      : sp.p_max;

    out.feasible = true;
    out.p_s_star = ps;
    out.q_star = std::max(required_prior_q(ps, sp, c, r_m), peak_detection_q(ps, c));
    out.xi_star = min_detection_error(out.q_star, ps, sp, c);
    out.r_c = effective_covert_rate(out.q_star, ps, sp, c);
    return out;
}

CpccSolution solve_cpcc_fixed_qhalf(const SystemParams& sp, const Coefficients& c,
                                    double r_m, const SearchOptions& opts) {
    CpccSolution out;
    const double a = sp.lambda_sr * c.beta;
    if (r_m > 0.5 * sp.rate * std::exp(-a / sp.p_max)) return out;

    const double lo =
        (r_m > 0.0) ? std::max(a / std::log(sp.rate / (2.0 * r_m)), kEpsPower)
                    : kEpsPower;
    auto xi_half = [&](double x) { return min_detection_error(0.5, x, sp, c); };
    const double ps = (lo < sp.p_max)
                          ? maximize_on_interval(xi_half, lo, sp.p_max, opts).arg
                          : sp.p_max;

    out.feasible = true;
    out.p_s_star = ps;
    out.q_star = 0.5;
    out.xi_star = min_detection_error(0.5, ps, sp, c);
    out.r_c = effective_covert_rate(0.5, ps, sp, c);
    return out;
}

OracleSolution grid_oracle(const SystemParams& sp, const Coefficients& c, double r_m,
                           Mode mode, int n_ps, int n_prob) {
    if (n_ps < 100 || n_prob < 100) {
        throw std::invalid_argument("grid_oracle: need n_ps, n_prob >= 100");
    }

    const bool single_prob = (mode == Mode::WpccP1 || mode == Mode::CpccQhalf);
    std::vector<double> probs;
    if (single_prob) {
        probs.push_back(mode == Mode::WpccP1 ? 1.0 : 0.5);
    } else {
        probs.reserve(n_prob + 1);
        bool has_half = false;
        for (int j = 1; j <= n_prob; ++j) {
            const double p = static_cast<double>(j) / n_prob;
            if (p == 0.5) has_half = true;
            probs.push_back(p);
        }
        if (!has_half) {
            probs.push_back(0.5);
            std::sort(probs.begin(), probs.end());
        }
    }

    OracleSolution best;
    const double ps_lo = sp.p_max * 1e-6;
    const double log_ratio = std::log(sp.p_max / ps_lo);
    for (int i = 0; i < n_ps; ++i) {
        const double ps = (i == n_ps - 1)
                              ? sp.p_max
                              : ps_lo * std::exp(log_ratio * i / (n_ps - 1));
        const double outage_factor = std::exp(-sp.lambda_sr * c.beta / ps);
        const double q_peak = peak_detection_q(ps, c);
        const double xi_decay = std::exp(-c.mu2 * ps);
        for (const double prob : probs) {
            double q;
            if (mode == Mode::Wpcc || mode == Mode::WpccP1) {
                q = 1.0 / (1.0 + (1.0 - prob) / (prob * prob) + c.mu1 * ps);
            } else {
                q = prob;
            }
            const double rc = q * sp.rate * outage_factor;
            if (rc < r_m) continue;
            const double xi = (q <= q_peak) ? q : (1.0 - q) * xi_decay;
            if (xi > best.xi_star) {
                best.feasible = true;
                best.p_s_star = ps;
                best.prob_star = prob;
                best.q_star = q;
                best.xi_star = xi;
                best.r_c = rc;
            }
        }
    }
    return best;
}

}  // namespace attcc
