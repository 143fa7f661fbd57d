// Experiment configuration: parsing, unit conversion, and the derived
// constants shared by the analytic expressions, solvers and simulators.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace attcc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All internal computation is in linear SI units (watts, joules, seconds).
// Logarithmic units (dBm, dB) exist only at the config/CSV boundary.
struct SystemParams {
    double eta;            // energy conversion efficiency, in (0,1)
    double slot_duration;  // T, seconds
    double rate;           // fixed transmission rate R, bits/s/Hz
    double p_max;          // maximum information transmit power P_m, watts
    double p_r;            // AN transmit power P_r, watts
    double sigma2_r;       // receiver noise power, watts
    double sigma2_w;       // warden noise power, watts
    double phi;            // residual self-interference coefficient, in [0,1]
    double lambda_sr;      // 1/lambda_xy is the mean channel gain E[|h_xy|^2]
    double lambda_rs;
    double lambda_rw;
    double h_sw_gain;      // fixed sensor->warden gain |h_sw|^2, known to the warden
};

// Constants reused by every module downstream of the config.
struct Coefficients {
    double mu1;       // lambda_rs / (eta P_r), per watt
    double mu2;       // lambda_rw |h_sw|^2 / P_r, per watt
    double mu3;       // peak of the p=1 covert rate in P_s, watts
    double beta;      // (2^R - 1)(phi P_r + sigma_r^2), watts
    double lambda_e;  // rate of the harvested-energy distribution, per joule
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double lin);

// Mean channel gain from the path-loss model:
//   G_lin * (c / (4 pi f))^2 * (d / d0)^(-alpha),  c = 3e8 m/s.
double channel_mean_gain(double gain_db, double freq_hz, double dist_m,
                         double ref_dist_m, double pathloss_exp);

// Throws ConfigError naming the offending field when a bound is violated.
void validate(const SystemParams& p);

// Parses a flat key=value document ('#' starts a comment, blank lines
// ignored, unknown keys rejected). Channel means come either from explicit
// lambda_*/h_sw_gain keys or from the path-loss keys; explicit keys win.
SystemParams load_params(std::string_view text);

Coefficients derive_coefficients(const SystemParams& p);

}  // namespace attcc
