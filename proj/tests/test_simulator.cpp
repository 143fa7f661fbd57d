#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attcc/analytic.hpp"
#include "attcc/rng.hpp"
#include "attcc/simulator.hpp"
#include "test_support.hpp"

using namespace attcc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("simulate_att determinism and energy safety") {
    const SystemParams sp = test::section5_params();
    const auto a = simulate_att(sp, sp.p_max, 0.7, 50'000, 9001);
    const auto b = simulate_att(sp, sp.p_max, 0.7, 50'000, 9001);
    CHECK(a.n_it_slots == b.n_it_slots);
    CHECK(a.q_hat.point == b.q_hat.point);
    CHECK(a.gap_mean_hat.point == b.gap_mean_hat.point);
    CHECK(a.residual_samples == b.residual_samples);
    REQUIRE(a.insufficient_gap_samples.size() == b.insufficient_gap_samples.size());
    for (std::size_t i = 0; i < a.insufficient_gap_samples.size(); ++i) {
        CHECK(a.insufficient_gap_samples[i].start_residual ==
              b.insufficient_gap_samples[i].start_residual);
        CHECK(a.insufficient_gap_samples[i].m_prime ==
              b.insufficient_gap_samples[i].m_prime);
    }
    const auto c = simulate_att(sp, sp.p_max, 0.7, 50'000, 9002);
    CHECK(a.q_hat.point != c.q_hat.point);

    CHECK(a.q_hat.point == static_cast<double>(a.n_it_slots) /
                               static_cast<double>(a.n_slots));
    for (double r : a.residual_samples) CHECK(r >= 0.0);
    for (const auto& g : a.insufficient_gap_samples) {
        CHECK(g.start_residual >= 0.0);
        CHECK(g.start_residual < sp.p_max * sp.slot_duration);
    }
}

TEST_CASE("simulate_att argument validation") {
    const SystemParams sp = test::section5_params();
    CHECK_THROWS_AS(simulate_att(sp, sp.p_max, 0.0, 100, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_att(sp, sp.p_max, 1.5, 100, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_att(sp, sp.p_max, 0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("negligible transmit cost makes almost every slot an IT slot") {
    const SystemParams sp = test::section5_params();
    const auto stats = simulate_att(sp, 1e-18, 1.0, 20'000, 4);
    CHECK(stats.q_hat.point >= 1.0 - 2.0 / 20'000.0);
}

TEST_CASE("q_hat matches the closed form at p=1") {
    // At p=1 the prior q = 1/(1 + mu1 P_s); check the estimator against it.
    for (double pr_dbm : {20.0, 30.0, 40.0}) {
        const SystemParams sp = test::section5_params(pr_dbm);
        const Coefficients c = derive_coefficients(sp);
        const auto stats = simulate_att(sp, sp.p_max, 1.0, 400'000, 77);
        const double q = prior_transmit_probability(1.0, sp.p_max, c);
        const double se = stats.q_hat.half_width_95 / 1.959963984540054;
        CHECK(std::fabs(stats.q_hat.point - q) / se < 4.0);

        const double gap = c.mu1 * sp.p_max;
        const double se_gap = stats.gap_mean_hat.half_width_95 / 1.959963984540054;
        CHECK(std::fabs(stats.gap_mean_hat.point - gap) / se_gap < 4.0);
    }
}

TEST_CASE("monotonicity transfer: q_hat increases with p under matched seeds") {
    const SystemParams sp = test::section5_params();
    const auto lo = simulate_att(sp, sp.p_max, 0.3, 200'000, 123);
    const auto hi = simulate_att(sp, sp.p_max, 0.9, 200'000, 123);
    CHECK(hi.q_hat.point > lo.q_hat.point);
}

TEST_CASE("residual distribution test") {
    const SystemParams sp = test::section5_params(20.0);
    const Coefficients c = derive_coefficients(sp);

    SUBCASE("post-IT residuals at p=1 pass the KS gate") {
        const auto stats = simulate_att(sp, sp.p_max, 1.0, 400'000, 31);
        REQUIRE(stats.residual_samples.size() >= 10'000);
        const double ks = residual_distribution_test(stats, c);
        CHECK(ks < 1.63 / std::sqrt(static_cast<double>(stats.residual_samples.size())));
    }

    SUBCASE("null calibration and wrong-rate rejection") {
        const std::size_t n = 10'000;
        int failures = 0;
        for (std::uint64_t rep = 0; rep < 50; ++rep) {
            CounterRng rng(500 + rep, 8);
            AttStats synthetic;
            synthetic.residual_samples.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                synthetic.residual_samples.push_back(rng.exponential(1.0 / c.lambda_e));
            }
            if (residual_distribution_test(synthetic, c) >=
                1.63 / std::sqrt(static_cast<double>(n))) {
                ++failures;
            }
        }
        CHECK(failures <= 2);  // 1% level, 50 repetitions

        // Samples at twice the rate must be rejected.
        CounterRng rng(4242, 8);
        AttStats wrong;
        for (std::size_t i = 0; i < n; ++i) {
            wrong.residual_samples.push_back(rng.exponential(0.5 / c.lambda_e));
        }
        CHECK(residual_distribution_test(wrong, c) >
              1.63 / std::sqrt(static_cast<double>(n)));
    }

    SUBCASE("sample-size error") {
        AttStats tiny;
        tiny.residual_samples.assign(10, 0.1);
        CHECK_THROWS_AS(residual_distribution_test(tiny, c), std::invalid_argument);
    }
}

TEST_CASE("insufficient gap test") {
    const SystemParams sp = test::section5_params(20.0);
    const Coefficients c = derive_coefficients(sp);

    const auto stats = simulate_att(sp, sp.p_max, 1.0, 400'000, 57);
    REQUIRE(stats.insufficient_gap_samples.size() >= 10'000);
    const auto report = insufficient_gap_test(stats, sp.p_max, c);
    CHECK(report.bins.size() == 10);
    CHECK(report.max_abs_z < 4.0);

    // The conditional intensity drops linearly from mu1 P_s at zero residual
    // to 0 at a full battery, so bin expectations must decrease.
    for (std::size_t i = 1; i < report.bins.size(); ++i) {
        CHECK(report.bins[i].expected_mean < report.bins[i - 1].expected_mean);
    }
    CHECK(report.bins.front().expected_mean <= c.mu1 * sp.p_max);
    CHECK(report.bins.back().expected_mean >= 0.0);

    AttStats tiny;
    tiny.insufficient_gap_samples.assign(99, {0.0, 1});
    CHECK_THROWS_AS(insufficient_gap_test(tiny, sp.p_max, c), std::invalid_argument);
}

TEST_CASE("estimate_detection endpoints and determinism across threads") {
    const SystemParams sp = test::section5_params();
    const double ps = sp.p_max;

    const auto never = estimate_detection(sp, ps, 0.37, kInf, 100'000, 5);
    CHECK(never.p_fa.point == 0.0);
    CHECK(never.p_md.point == 1.0);
    CHECK(never.xi.point ==
          doctest::Approx(static_cast<double>(never.p_md.n) / 100'000.0).epsilon(1e-15));

    const auto always = estimate_detection(sp, ps, 0.37, 0.0, 100'000, 5);
    CHECK(always.p_fa.point == 1.0);
    CHECK(always.p_md.point == 0.0);
    CHECK(always.xi.point ==
          doctest::Approx(1.0 - static_cast<double>(always.p_md.n) / 100'000.0)
              .epsilon(1e-15));

    const auto serial = estimate_detection(sp, ps, 0.37, 2e-5, 300'000, 5, 1);
    const auto parallel = estimate_detection(sp, ps, 0.37, 2e-5, 300'000, 5, 4);
    CHECK(serial.xi.point == parallel.xi.point);
    CHECK(serial.p_fa.point == parallel.p_fa.point);
    CHECK(serial.p_md.point == parallel.p_md.point);
}

TEST_CASE("estimate_detection agrees with the closed form at the optimal threshold") {
    const SystemParams sp = test::section5_params(10.0);
    const Coefficients c = derive_coefficients(sp);
    const double ps = sp.p_max;
    const double q = 0.6;
    const double tau = optimal_threshold(q, ps, sp, c);
    const auto est = estimate_detection(sp, ps, q, tau, 400'000, 21, 2);
    const double xi = min_detection_error(q, ps, sp, c);
    const double se = est.xi.half_width_95 / 1.959963984540054;
    CHECK(std::fabs(est.xi.point - xi) / se < 4.0);
}

TEST_CASE("threshold scan") {
    const SystemParams sp = test::section5_params(10.0);
    const Coefficients c = derive_coefficients(sp);
    const double ps = sp.p_max;
    const auto grid = default_tau_grid(sp, ps, 201);
    REQUIRE(grid.size() == 201);
    REQUIRE(std::isinf(grid.back()));
    REQUIRE(grid.front() == doctest::Approx(0.5 * sp.sigma2_w));

    SUBCASE("analytic overlay within Monte-Carlo error") {
        const double q = 0.6;
        const auto scan = threshold_scan(sp, ps, q, grid, 300'000, 99, 2);
        REQUIRE(scan.size() == grid.size());
        double max_z = 0.0;
        for (const auto& pt : scan) {
            const double exact = detection_error(pt.tau, q, ps, sp, c).xi;
            const double se = pt.xi_hat.half_width_95 / 1.959963984540054;
            max_z = std::max(max_z, std::fabs(pt.xi_hat.point - exact) / se);
        }
        CHECK(max_z < 4.0);
    }

    SUBCASE("argmin matches the optimal threshold branch") {
        const double q_above = 0.6;  // boundary here is ~0.42
        auto scan = threshold_scan(sp, ps, q_above, grid, 300'000, 99, 2);
        std::size_t argmin = 0;
        for (std::size_t i = 1; i < scan.size(); ++i) {
            if (scan[i].xi_hat.point < scan[argmin].xi_hat.point) argmin = i;
        }
        const double tau_star = optimal_threshold(q_above, ps, sp, c);
        REQUIRE(!std::isinf(tau_star));
        const double step = grid[1] - grid[0];
        CHECK(std::fabs(scan[argmin].tau - tau_star) <= step * (1.0 + 1e-9));

        const double q_below = 0.3;
        scan = threshold_scan(sp, ps, q_below, grid, 300'000, 99, 2);
        argmin = 0;
        for (std::size_t i = 1; i < scan.size(); ++i) {
            if (scan[i].xi_hat.point < scan[argmin].xi_hat.point) argmin = i;
        }
        CHECK(std::isinf(scan[argmin].tau));
    }

    SUBCASE("common random numbers give identical draws across thread counts") {
        const auto one = threshold_scan(sp, ps, 0.5, grid, 200'000, 7, 1);
        const auto eight = threshold_scan(sp, ps, 0.5, grid, 200'000, 7, 8);
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].xi_hat.point == eight[i].xi_hat.point);
        }
    }
}

TEST_CASE("estimate_outage") {
    SystemParams sp = test::section5_params();
    const Coefficients c = derive_coefficients(sp);

    // Tiny rate: outage never happens.
    SystemParams easy = sp;
    easy.rate = 1e-9;
    CHECK(estimate_outage(easy, sp.p_max, 50'000, 3).point == 0.0);

    // Overwhelming interference: outage always happens.
    SystemParams hard = sp;
    hard.sigma2_r = 1e12;
    CHECK(estimate_outage(hard, sp.p_max, 50'000, 3).point == 1.0);

    const auto est = estimate_outage(sp, sp.p_max, 400'000, 13, 2);
    const double exact = outage_probability(sp.p_max, sp, c);
    const double se = est.half_width_95 / 1.959963984540054;
    CHECK(std::fabs(est.point - exact) / se < 4.0);

    CHECK(estimate_outage(sp, sp.p_max, 400'000, 13, 1).point ==
          estimate_outage(sp, sp.p_max, 400'000, 13, 8).point);
}
