// Monte-Carlo oracles: slot-level simulation of the probabilistic
// accumulate-then-transmit energy dynamics, radiometer detection trials and
// outage trials. Everything is deterministic given (inputs, seed) and
// independent of the worker count.
#pragma once

#include <cstdint>
#include <vector>

#include "attcc/config.hpp"

namespace attcc {

struct MonteCarloEstimate {
    double point = 0.0;
    double half_width_95 = 0.0;
    std::uint64_t n = 0;
};

// One insufficient-energy accumulation run: the post-IT residual it started
// from and the number of full harvest increments before the crossing slot.
struct GapSample {
    double start_residual;
    std::uint32_t m_prime;
};

struct AttStats {
    std::uint64_t n_slots = 0;
    std::uint64_t n_it_slots = 0;
    MonteCarloEstimate q_hat;         // fraction of IT slots
    MonteCarloEstimate gap_mean_hat;  // mean EH slots between consecutive ITs
    std::vector<double> residual_samples;         // post-IT energies, joules
    std::vector<GapSample> insufficient_gap_samples;
};

// Slot-level protocol simulation starting from an empty battery. Harvest
// draws are exponential with mean eta P_r T / lambda_rs, fresh each EH slot;
// with sufficient energy the sensor transmits with probability p. The first
// IT event is excluded from gap and residual-tracking statistics since it has
// no preceding IT. Sequential by construction (the energy recursion cannot be
// chunked without changing the process).
AttStats simulate_att(const SystemParams& sp, double p_s, double p,
                      std::uint64_t n_slots, std::uint64_t seed);

// Kolmogorov-Smirnov statistic of the post-IT residuals against
// Exponential(lambda_e). Requires >= 1000 samples.
double residual_distribution_test(const AttStats& stats, const Coefficients& c);

struct GapBin {
    double mean_start_residual = 0.0;
    double expected_mean = 0.0;  // mean Poisson intensity over the bin
    double observed_mean = 0.0;
    double z = 0.0;              // Poisson score (sum_m - sum_lambda)/sqrt(sum_lambda)
    std::uint64_t n = 0;
    bool enough = false;
};

struct GapTestReport {
    std::vector<GapBin> bins;
    double max_abs_z = 0.0;       // over bins with enough samples
    std::size_t underpowered_bins = 0;
};

// Bins the recorded accumulation runs by starting residual (deciles) and
// compares each bin's counts against the conditional Poisson intensity
// lambda_e (P_s T - E_a) = mu1 P_s - lambda_e E_a. Requires >= 1000 samples.
GapTestReport insufficient_gap_test(const AttStats& stats, double p_s,
                                    const Coefficients& c);

struct DetectionEstimate {
    MonteCarloEstimate p_fa;
    MonteCarloEstimate p_md;
    MonteCarloEstimate xi;
};

// Radiometer trials: hypothesis ~ Bernoulli(q), |h_rw|^2 exponential with
// mean 1/lambda_rw, |h_sw|^2 fixed; decide "transmitting" when the received
// power exceeds tau (tau may be +infinity).
DetectionEstimate estimate_detection(const SystemParams& sp, double p_s, double q,
                                     double tau, std::uint64_t n_trials,
                                     std::uint64_t seed, int threads = 1);

struct ScanPoint {
    double tau;
    MonteCarloEstimate xi_hat;
};

// Evaluates the empirical detection error on a threshold grid with common
// random numbers (the same hypothesis/channel draws reused at every tau).
std::vector<ScanPoint> threshold_scan(const SystemParams& sp, double p_s, double q,
                                      const std::vector<double>& tau_grid,
                                      std::uint64_t n_trials, std::uint64_t seed,
                                      int threads = 1);

// points-1 uniform thresholds on [sigma_w^2/2, 2(sigma_w^2 + P_s|h_sw|^2)]
// plus +infinity.
std::vector<double> default_tau_grid(const SystemParams& sp, double p_s, int points);

// Fraction of Rayleigh draws with log2(1 + P_s|h_sr|^2/(phi P_r + sigma_r^2)) < R.
MonteCarloEstimate estimate_outage(const SystemParams& sp, double p_s,
                                   std::uint64_t n_trials, std::uint64_t seed,
                                   int threads = 1);

}  // namespace attcc
