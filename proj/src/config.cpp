#include "attcc/config.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace attcc {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double channel_mean_gain(double gain_db, double freq_hz, double dist_m,
                         double ref_dist_m, double pathloss_exp) {
    if (!(freq_hz > 0.0) || !(dist_m > 0.0) || !(ref_dist_m > 0.0)) {
        throw ConfigError("channel_mean_gain: freq, dist and ref_dist must be positive");
    }
    constexpr double c = 3e8;  // m/s
    const double k = c / (4.0 * std::numbers::pi * freq_hz);
    return db_to_linear(gain_db) * k * k * std::pow(dist_m / ref_dist_m, -pathloss_exp);
}

namespace {

void require_positive_finite(double v, const char* key) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw ConfigError(std::string(key) + " must be a positive finite value");
    }
}

}  // namespace

void validate(const SystemParams& p) {
    if (!std::isfinite(p.eta) || !(p.eta > 0.0) || !(p.eta < 1.0)) {
        throw ConfigError("eta must be in (0,1)");
    }
    if (!std::isfinite(p.phi) || p.phi < 0.0 || p.phi > 1.0) {
        throw ConfigError("phi must be in [0,1]");
    }
    require_positive_finite(p.slot_duration, "slot_duration_s");
    require_positive_finite(p.rate, "rate_bps_hz");
    require_positive_finite(p.p_max, "p_max_dbm");
    require_positive_finite(p.p_r, "p_r_dbm");
    require_positive_finite(p.sigma2_r, "sigma2_r_dbm");
    require_positive_finite(p.sigma2_w, "sigma2_w_dbm");
    require_positive_finite(p.lambda_sr, "lambda_sr");
    require_positive_finite(p.lambda_rs, "lambda_rs");
    require_positive_finite(p.lambda_rw, "lambda_rw");
    require_positive_finite(p.h_sw_gain, "h_sw_gain");
}

SystemParams load_params(std::string_view text) {
    static const std::set<std::string> known = {
        "eta",          "slot_duration_s", "rate_bps_hz", "p_max_dbm",
        "p_r_dbm",      "sigma2_r_dbm",    "sigma2_w_dbm", "phi_db",
        "lambda_sr",    "lambda_rs",       "lambda_rw",    "h_sw_gain",
        "gain_db",      "freq_hz",         "dist_m",       "ref_dist_m",
        "pathloss_exp"};

    std::map<std::string, double> kv;
    std::istringstream lines{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(lines, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known.count(key)) {
            throw ConfigError("unknown key '" + key + "'");
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(val, &used);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': cannot parse value '" + val + "'");
        }
        if (used != val.size()) {
            throw ConfigError("key '" + key + "': trailing characters in value '" + val + "'");
        }
        kv.emplace(key, parsed);
    }

    auto get = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(std::string("missing key '") + key + "'");
        return it->second;
    };
    auto has = [&](const char* key) { return kv.count(key) != 0; };

    SystemParams p{};
    p.eta = get("eta");
    p.slot_duration = get("slot_duration_s");
    p.rate = get("rate_bps_hz");
    p.p_max = dbm_to_watts(get("p_max_dbm"));
    p.p_r = dbm_to_watts(get("p_r_dbm"));
    p.sigma2_r = dbm_to_watts(get("sigma2_r_dbm"));
    p.sigma2_w = dbm_to_watts(get("sigma2_w_dbm"));
    p.phi = db_to_linear(get("phi_db"));

    const bool pathloss_any = has("gain_db") || has("freq_hz") || has("dist_m") ||
                              has("ref_dist_m") || has("pathloss_exp");
    if (pathloss_any) {
        const double gain = channel_mean_gain(get("gain_db"), get("freq_hz"), get("dist_m"),
                                              get("ref_dist_m"), get("pathloss_exp"));
        p.lambda_sr = p.lambda_rs = p.lambda_rw = 1.0 / gain;
        p.h_sw_gain = gain;
    }
    // Explicit channel keys win over path-loss-derived values.
    if (has("lambda_sr")) p.lambda_sr = get("lambda_sr");
    if (has("lambda_rs")) p.lambda_rs = get("lambda_rs");
    if (has("lambda_rw")) p.lambda_rw = get("lambda_rw");
    if (has("h_sw_gain")) p.h_sw_gain = get("h_sw_gain");
    if (!pathloss_any) {
        for (const char* key : {"lambda_sr", "lambda_rs", "lambda_rw", "h_sw_gain"}) {
            if (!has(key)) throw ConfigError(std::string("missing key '") + key + "'");
        }
    }

    validate(p);
    return p;
}

Coefficients derive_coefficients(const SystemParams& p) {
    Coefficients c{};
    c.mu1 = p.lambda_rs / (p.eta * p.p_r);
    c.mu2 = p.lambda_rw * p.h_sw_gain / p.p_r;
    c.beta = (std::pow(2.0, p.rate) - 1.0) * (p.phi * p.p_r + p.sigma2_r);
    const double a = p.lambda_sr * c.beta;
    c.mu3 = 0.5 * a * (std::sqrt(1.0 + 4.0 / (c.mu1 * a)) + 1.0);
    c.lambda_e = c.mu1 / p.slot_duration;
    return c;
}

}  // namespace attcc
