#include "attcc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "attcc/rng.hpp"

namespace attcc {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Fixed stream ids so different oracles never share draws for one seed.
constexpr std::uint64_t kAttStream = 0x41545400;
constexpr std::uint64_t kDetectionStream = 0x44455400;
constexpr std::uint64_t kOutageStream = 0x4f555400;

MonteCarloEstimate proportion_estimate(std::uint64_t hits, std::uint64_t n) {
    MonteCarloEstimate e;
    e.n = n;
    if (n == 0) return e;
    e.point = static_cast<double>(hits) / static_cast<double>(n);
    e.half_width_95 = kZ95 * std::sqrt(e.point * (1.0 - e.point) / static_cast<double>(n));
    return e;
}

// Runs fn(chunk_begin, chunk_end) over [0,n) in fixed-size chunks. Chunk
// boundaries depend only on n, never on the thread count, and fn must write
// only to per-trial or per-chunk slots.
template <class Fn>
void run_chunks(std::uint64_t n, int threads, Fn&& fn) {
    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
    if (threads <= 1 || n_chunks <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            fn(c * kChunk, std::min(n, (c + 1) * kChunk));
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
            fn(c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<std::uint64_t>(threads, n_chunks));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

AttStats simulate_att(const SystemParams& sp, double p_s, double p,
                      std::uint64_t n_slots, std::uint64_t seed) {
    if (n_slots < 1) throw std::invalid_argument("simulate_att: n_slots must be >= 1");
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("simulate_att: p must be in (0,1]");
    if (!(p_s > 0.0)) throw std::domain_error("simulate_att: p_s must be positive");

    AttStats stats;
    stats.n_slots = n_slots;

    CounterRng rng(seed, kAttStream);
    const double need = p_s * sp.slot_duration;  // energy consumed per IT slot
    const double harvest_mean = sp.eta * sp.p_r * sp.slot_duration / sp.lambda_rs;

    double energy = 0.0;
    bool seen_it = false;
    std::uint64_t eh_since_it = 0;

    // Post-IT accumulation tracking for the conditional Poisson samples.
    bool tracking = false;
    double track_start = 0.0;
    std::uint32_t track_count = 0;

    // Welford accumulation for the gap mean.
    std::uint64_t gap_n = 0;
    double gap_mean = 0.0;
    double gap_m2 = 0.0;

    for (std::uint64_t k = 0; k < n_slots; ++k) {
        if (energy >= need && rng.bernoulli(p)) {
            energy -= need;
            assert(energy >= 0.0);
            ++stats.n_it_slots;
            if (seen_it) {
                ++gap_n;
                const double d = static_cast<double>(eh_since_it) - gap_mean;
                gap_mean += d / static_cast<double>(gap_n);
                gap_m2 += d * (static_cast<double>(eh_since_it) - gap_mean);
                stats.residual_samples.push_back(energy);
            }
            seen_it = true;
            eh_since_it = 0;
            tracking = energy < need;
            track_start = energy;
            track_count = 0;
        } else {
            energy += rng.exponential(harvest_mean);
            ++eh_since_it;
            if (tracking) {
                if (energy >= need) {
                    stats.insufficient_gap_samples.push_back({track_start, track_count});
                    tracking = false;
                } else {
                    ++track_count;
                }
            }
        }
    }

    stats.q_hat = proportion_estimate(stats.n_it_slots, stats.n_slots);
    stats.gap_mean_hat.n = gap_n;
    stats.gap_mean_hat.point = gap_mean;
    if (gap_n > 1) {
        stats.gap_mean_hat.half_width_95 =
            kZ95 * std::sqrt(gap_m2 / static_cast<double>(gap_n - 1) /
                             static_cast<double>(gap_n));
    }
    return stats;
}

double residual_distribution_test(const AttStats& stats, const Coefficients& c) {
    const auto& samples = stats.residual_samples;
    if (samples.size() < 1000) {
        throw std::invalid_argument("residual_distribution_test: need >= 1000 samples");
    }
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = -std::expm1(-c.lambda_e * sorted[i]);
        ks = std::max(ks, cdf - static_cast<double>(i) / n);
        ks = std::max(ks, static_cast<double>(i + 1) / n - cdf);
    }
    return ks;
}

GapTestReport insufficient_gap_test(const AttStats& stats, double p_s,
                                    const Coefficients& c) {
    const auto& samples = stats.insufficient_gap_samples;
    if (samples.size() < 1000) {
        throw std::invalid_argument("insufficient_gap_test: need >= 1000 samples");
    }
    std::vector<GapSample> sorted(samples);
    std::sort(sorted.begin(), sorted.end(),
              [](const GapSample& a, const GapSample& b) {
                  return a.start_residual < b.start_residual;
              });

    GapTestReport report;
    constexpr std::size_t kBins = 10;
    const std::size_t n = sorted.size();
    for (std::size_t b = 0; b < kBins; ++b) {
        const std::size_t lo = b * n / kBins;
        const std::size_t hi = (b + 1) * n / kBins;
        GapBin bin;
        bin.n = hi - lo;
        double sum_z = 0.0, sum_m = 0.0, sum_lambda = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            sum_z += sorted[i].start_residual;
            sum_m += sorted[i].m_prime;
            sum_lambda += c.mu1 * p_s - c.lambda_e * sorted[i].start_residual;
        }
        bin.enough = bin.n >= 30 && sum_lambda > 0.0;
        if (bin.n > 0) {
            bin.mean_start_residual = sum_z / static_cast<double>(bin.n);
            bin.observed_mean = sum_m / static_cast<double>(bin.n);
            bin.expected_mean = sum_lambda / static_cast<double>(bin.n);
        }
        if (bin.enough) {
            bin.z = (sum_m - sum_lambda) / std::sqrt(sum_lambda);
            report.max_abs_z = std::max(report.max_abs_z, std::fabs(bin.z));
        } else {
            ++report.underpowered_bins;
        }
        report.bins.push_back(bin);
    }
    return report;
}

namespace {

// Per-trial draws are pure functions of the trial index (two draws each), so
// any chunking of trials yields identical samples.
void draw_detection_trials(const SystemParams& sp, double p_s, double q,
                           std::uint64_t n_trials, std::uint64_t seed, int threads,
                           std::vector<unsigned char>& hyp, std::vector<double>& power) {
    hyp.assign(n_trials, 0);
    power.assign(n_trials, 0.0);
    run_chunks(n_trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        CounterRng rng(seed, kDetectionStream);
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng.seek(2 * i);
            const bool h1 = rng.bernoulli(q);
            const double gain = rng.exponential(1.0 / sp.lambda_rw);
            double pw = sp.p_r * gain + sp.sigma2_w;
            if (h1) pw += p_s * sp.h_sw_gain;
            hyp[i] = h1 ? 1 : 0;
            power[i] = pw;
        }
    });
}

}  // namespace

DetectionEstimate estimate_detection(const SystemParams& sp, double p_s, double q,
                                     double tau, std::uint64_t n_trials,
                                     std::uint64_t seed, int threads) {
    if (n_trials < 1) throw std::invalid_argument("estimate_detection: n_trials must be >= 1");
    std::vector<unsigned char> hyp;
    std::vector<double> power;
    draw_detection_trials(sp, p_s, q, n_trials, seed, threads, hyp, power);

    std::uint64_t n1 = 0, fa = 0, md = 0;
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        const bool decide_tx = power[i] > tau;
        if (hyp[i]) {
            ++n1;
            if (!decide_tx) ++md;
        } else if (decide_tx) {
            ++fa;
        }
    }
    DetectionEstimate est;
    est.p_fa = proportion_estimate(fa, n_trials - n1);
    est.p_md = proportion_estimate(md, n1);
    est.xi = proportion_estimate(fa + md, n_trials);
    return est;
}

std::vector<ScanPoint> threshold_scan(const SystemParams& sp, double p_s, double q,
                                      const std::vector<double>& tau_grid,
                                      std::uint64_t n_trials, std::uint64_t seed,
                                      int threads) {
    if (n_trials < 1) throw std::invalid_argument("threshold_scan: n_trials must be >= 1");
    std::vector<unsigned char> hyp;
    std::vector<double> power;
    draw_detection_trials(sp, p_s, q, n_trials, seed, threads, hyp, power);

    std::vector<double> pw0, pw1;
    pw0.reserve(n_trials);
    pw1.reserve(n_trials);
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        (hyp[i] ? pw1 : pw0).push_back(power[i]);
    }
    std::sort(pw0.begin(), pw0.end());
    std::sort(pw1.begin(), pw1.end());

    std::vector<ScanPoint> out;
    out.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        // False alarms: H0 powers strictly above tau. Misses: H1 powers <= tau.
        const auto fa = pw0.end() - std::upper_bound(pw0.begin(), pw0.end(), tau);
        const auto md = std::upper_bound(pw1.begin(), pw1.end(), tau) - pw1.begin();
        out.push_back({tau, proportion_estimate(static_cast<std::uint64_t>(fa + md),
                                                n_trials)});
    }
    return out;
}

std::vector<double> default_tau_grid(const SystemParams& sp, double p_s, int points) {
    if (points < 2) throw std::invalid_argument("default_tau_grid: points must be >= 2");
    const double lo = 0.5 * sp.sigma2_w;
    const double hi = 2.0 * (sp.sigma2_w + p_s * sp.h_sw_gain);
    std::vector<double> grid;
    grid.reserve(points);
    const int linear = points - 1;
    for (int i = 0; i < linear; ++i) {
        grid.push_back(linear == 1 ? lo : lo + (hi - lo) * i / (linear - 1));
    }
    grid.push_back(std::numeric_limits<double>::infinity());
    return grid;
}

MonteCarloEstimate estimate_outage(const SystemParams& sp, double p_s,
                                   std::uint64_t n_trials, std::uint64_t seed,
                                   int threads) {
    if (n_trials < 1) throw std::invalid_argument("estimate_outage: n_trials must be >= 1");
    const double denom = sp.phi * sp.p_r + sp.sigma2_r;
    const std::uint64_t n_chunks = (n_trials + (1 << 16) - 1) / (1 << 16);
    std::vector<std::uint64_t> chunk_hits(n_chunks, 0);
    run_chunks(n_trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        CounterRng rng(seed, kOutageStream);
        std::uint64_t hits = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng.seek(i);
            const double gain = rng.exponential(1.0 / sp.lambda_sr);
            if (std::log2(1.0 + p_s * gain / denom) < sp.rate) ++hits;
        }
        chunk_hits[lo >> 16] = hits;
    });
    std::uint64_t total = 0;
    for (const auto h : chunk_hits) total += h;
    return proportion_estimate(total, n_trials);
}

}  // namespace attcc
