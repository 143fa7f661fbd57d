#include "attcc/verify.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "attcc/analytic.hpp"
#include "attcc/optimizer.hpp"
#include "attcc/simulator.hpp"
#include "attcc/sweep.hpp"

namespace attcc {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kZ99 = 2.5758293035489004;

VerifyCheck make_check(std::string name, double stat, double threshold) {
    VerifyCheck c{std::move(name), stat, threshold, stat < threshold ? 1 : 0};
    return c;
}

VerifyCheck make_skipped(std::string name, double stat, double threshold) {
    return VerifyCheck{std::move(name), stat, threshold, -1};
}

}  // namespace

bool VerificationReport::all_passed() const {
    for (const auto& c : checks) {
        if (c.status == 0) return false;
    }
    return true;
}

std::vector<std::string> VerificationReport::failing() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (c.status == 0) out.push_back(c.name);
    }
    return out;
}

VerificationReport run_verification(const SystemParams& sp, const VerifyOptions& o) {
    VerificationReport rep;

    // --- Prior-transmit-probability and gap-mean grid -----------------------
    const double pr_dbm_grid[] = {20.0, 30.0, 40.0};
    const double ps_dbm_grid[] = {0.0, 5.0};
    const double p_grid[] = {0.3, 0.7, 1.0};
    const char* p_names[] = {"0.3", "0.7", "1"};

    struct AttCase {
        std::string tag;
        SystemParams params;
        Coefficients coeff;
        double p_s = 0.0;
        double p = 0.0;
        AttStats stats;
    };
    std::vector<AttCase> cases;
    for (double pr_dbm : pr_dbm_grid) {
        for (double ps_dbm : ps_dbm_grid) {
            for (std::size_t pi = 0; pi < 3; ++pi) {
                AttCase c;
                c.params = sp;
                c.params.p_r = dbm_to_watts(pr_dbm);
                c.coeff = derive_coefficients(c.params);
                c.p_s = dbm_to_watts(ps_dbm);
                c.p = p_grid[pi];
                char tag[64];
                std::snprintf(tag, sizeof(tag), "pr%.0f_ps%.0f_p%s", pr_dbm, ps_dbm,
                              p_names[pi]);
                c.tag = tag;
                cases.push_back(std::move(c));
            }
        }
    }

    {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < cases.size();
                 i = next.fetch_add(1)) {
                cases[i].stats = simulate_att(cases[i].params, cases[i].p_s, cases[i].p,
                                              o.n_slots, o.seed * 1'000'003 + i);
            }
        };
        const int n_workers = std::max(1, std::min<int>(o.threads, cases.size()));
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers - 1; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    for (const auto& c : cases) {
        const double q_closed = prior_transmit_probability(c.p, c.p_s, c.coeff);
        const double se_q = c.stats.q_hat.half_width_95 / kZ95;
        const std::uint64_t n_it = c.stats.n_it_slots;
        if (n_it < 100 || c.stats.n_slots - n_it < 100 || se_q <= 0.0) {
            rep.checks.push_back(
                make_skipped("thm1_q_" + c.tag, static_cast<double>(n_it), 100.0));
        } else {
            const double z = std::fabs(c.stats.q_hat.point - q_closed) / se_q;
            rep.checks.push_back(make_check("thm1_q_" + c.tag, z, kZ99));
        }

        const double gap_closed = c.coeff.mu1 * c.p_s + (1.0 - c.p) / (c.p * c.p);
        const double se_gap = c.stats.gap_mean_hat.half_width_95 / kZ95;
        if (c.stats.gap_mean_hat.n < 100 || se_gap <= 0.0) {
            rep.checks.push_back(make_skipped(
                "gap_mean_" + c.tag, static_cast<double>(c.stats.gap_mean_hat.n), 100.0));
        } else {
            const double z = std::fabs(c.stats.gap_mean_hat.point - gap_closed) / se_gap;
            rep.checks.push_back(make_check("gap_mean_" + c.tag, z, 3.0));
        }
    }

    // --- Residual distribution and conditional Poisson counts ---------------
    // The P_r=20 dBm, P_s=5 dBm, p=1 case: nearly every cycle re-accumulates,
    // so post-IT residuals are abundant and serially almost independent.
    {
        const AttCase* ks_case = nullptr;
        for (const auto& c : cases) {
            if (c.p == 1.0 && std::fabs(watts_to_dbm(c.params.p_r) - 20.0) < 1e-9 &&
                std::fabs(watts_to_dbm(c.p_s) - 5.0) < 1e-9) {
                ks_case = &c;
            }
        }
        if (ks_case != nullptr) {
            const auto n_res = ks_case->stats.residual_samples.size();
            if (n_res < 1000) {
                rep.checks.push_back(make_skipped("lemma1_residual_ks",
                                                  static_cast<double>(n_res), 1000.0));
            } else {
                const double ks =
                    residual_distribution_test(ks_case->stats, ks_case->coeff);
                rep.checks.push_back(make_check("lemma1_residual_ks", ks,
                                                1.63 / std::sqrt(static_cast<double>(n_res))));
            }
            const auto n_gap = ks_case->stats.insufficient_gap_samples.size();
            if (n_gap < 1000) {
                rep.checks.push_back(make_skipped("lemma2_gap_poisson",
                                                  static_cast<double>(n_gap), 1000.0));
            } else {
                const auto gap_rep =
                    insufficient_gap_test(ks_case->stats, ks_case->p_s, ks_case->coeff);
                rep.checks.push_back(
                    make_check("lemma2_gap_poisson", gap_rep.max_abs_z, 4.0));
            }
        }
    }

    // --- Detection-error scan against the closed form -----------------------
    // P_r = 10 dBm sharpens the detection-error curvature so the argmin
    // location check has power at the default trial count.
    {
        SystemParams scan_params = sp;
        scan_params.p_r = dbm_to_watts(10.0);
        const Coefficients scan_coeff = derive_coefficients(scan_params);
        const double p_s = sp.p_max;
        const auto grid = default_tau_grid(scan_params, p_s, o.tau_points);
        const double q_above = 0.6;
        const double q_below = 0.3;

        for (int variant = 0; variant < 2; ++variant) {
            const double q = (variant == 0) ? q_above : q_below;
            const auto scan = threshold_scan(scan_params, p_s, q, grid, o.n_trials,
                                             o.seed * 7'000'003 + variant, o.threads);
            double max_z = 0.0;
            std::size_t argmin = 0;
            for (std::size_t i = 0; i < scan.size(); ++i) {
                const double xi_exact =
                    detection_error(scan[i].tau, q, p_s, scan_params, scan_coeff).xi;
                const double se = scan[i].xi_hat.half_width_95 / kZ95;
                if (se > 0.0) {
                    max_z = std::max(max_z,
                                     std::fabs(scan[i].xi_hat.point - xi_exact) / se);
                }
                if (scan[i].xi_hat.point < scan[argmin].xi_hat.point) argmin = i;
            }
            const char* who = (variant == 0) ? "above" : "below";
            rep.checks.push_back(
                make_check(std::string("lemma3_scan_maxz_q_") + who, max_z, kZ95));

            if (o.n_trials < 100'000) {
                rep.checks.push_back(make_skipped(std::string("thm2_argmin_q_") + who,
                                                  static_cast<double>(o.n_trials),
                                                  100'000.0));
                continue;
            }
            const double tau_star = optimal_threshold(q, p_s, scan_params, scan_coeff);
            double stat;
            if (std::isinf(tau_star)) {
                stat = std::isinf(scan[argmin].tau) ? 0.0 : 999.0;
            } else if (std::isinf(scan[argmin].tau)) {
                stat = 999.0;
            } else {
                const double step = grid[1] - grid[0];
                stat = std::fabs(scan[argmin].tau - tau_star) / step;
            }
            rep.checks.push_back(
                make_check(std::string("thm2_argmin_q_") + who, stat, 1.0 + 1e-9));
        }
    }

    // --- Outage against the closed form --------------------------------------
    {
        const Coefficients c = derive_coefficients(sp);
        const double p_s = sp.p_max;
        const auto est = estimate_outage(sp, p_s, o.n_trials, o.seed * 9'000'011,
                                         o.threads);
        const double exact = outage_probability(p_s, sp, c);
        const double se = est.half_width_95 / kZ95;
        if (se <= 0.0) {
            rep.checks.push_back(make_skipped("outage_mc", est.point, 0.0));
        } else {
            rep.checks.push_back(
                make_check("outage_mc", std::fabs(est.point - exact) / se, kZ99));
        }
    }

    // --- Solvers against the exhaustive grid oracle -------------------------
    {
        const Coefficients c = derive_coefficients(sp);
        const auto wpcc = solve_wpcc(sp, c, o.r_m);
        const auto wpcc_oracle = grid_oracle(sp, c, o.r_m, Mode::Wpcc, 2000, 2000);
        rep.checks.push_back(make_check(
            "oracle_wpcc", std::fabs(wpcc.xi_star - wpcc_oracle.xi_star), 1e-3));

        const auto p1 = solve_wpcc_fixed_p1(sp, c, o.r_m);
        const auto p1_oracle = grid_oracle(sp, c, o.r_m, Mode::WpccP1, 2000, 2000);
        rep.checks.push_back(make_check(
            "oracle_wpcc_p1", std::fabs(p1.xi_star - p1_oracle.xi_star), 1e-3));

        const auto cpcc = solve_cpcc(sp, c, o.r_m);
        const auto cpcc_oracle = grid_oracle(sp, c, o.r_m, Mode::Cpcc, 2000, 2000);
        rep.checks.push_back(make_check(
            "oracle_cpcc", std::fabs(cpcc.xi_star - cpcc_oracle.xi_star), 1e-3));
    }

    return rep;
}

std::string render_csv(const VerificationReport& report) {
    std::string out = "check_name,statistic,threshold,pass\n";
    for (const auto& c : report.checks) {
        out += c.name;
        out += ',';
        out += format_number(c.statistic);
        out += ',';
        out += format_number(c.threshold);
        out += ',';
        out += (c.status == 1) ? "1" : (c.status == 0 ? "0" : "skip");
        out += '\n';
    }
    return out;
}

}  // namespace attcc
