#include "attcc/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace attcc {

SweepRecord solve_record(const SystemParams& sp, Mode mode, double r_m) {
    const Coefficients c = derive_coefficients(sp);
    SweepRecord rec;
    rec.sweep_var = "rm";
    rec.value = r_m;
    rec.mode = mode;

    bool feasible = false;
    double ps = 0.0, prob = 0.0, xi = 0.0, rc = 0.0;
    switch (mode) {
        case Mode::Wpcc: {
            const auto s = solve_wpcc(sp, c, r_m);
            feasible = s.feasible; ps = s.p_s_star; prob = s.p_star;
            xi = s.xi_star; rc = s.r_c;
            break;
        }
        case Mode::WpccP1: {
            const auto s = solve_wpcc_fixed_p1(sp, c, r_m);
            feasible = s.feasible; ps = s.p_s_star; prob = s.p_star;
            xi = s.xi_star; rc = s.r_c;
            break;
        }
        case Mode::Cpcc: {
            const auto s = solve_cpcc(sp, c, r_m);
            feasible = s.feasible; ps = s.p_s_star; prob = s.q_star;
            xi = s.xi_star; rc = s.r_c;
            break;
        }
        case Mode::CpccQhalf: {
            const auto s = solve_cpcc_fixed_qhalf(sp, c, r_m);
            feasible = s.feasible; ps = s.p_s_star; prob = s.q_star;
            xi = s.xi_star; rc = s.r_c;
            break;
        }
    }
    rec.feasible = feasible;
    if (feasible) {
        rec.ps_star_dbm = watts_to_dbm(ps);
        rec.prob_star = prob;
        rec.xi_star = xi;
        rec.r_c = rc;
    }
    return rec;
}

std::vector<SweepRecord> run_sweep(const SystemParams& sp, const SweepSpec& spec,
                                   int threads) {
    if (spec.points < 2) throw std::invalid_argument("run_sweep: points must be >= 2");
    if (!(spec.from < spec.to)) throw std::invalid_argument("run_sweep: need from < to");

    std::vector<SweepRecord> records(spec.points);
    auto compute = [&](int i) {
        const double value = spec.from + (spec.to - spec.from) * i / (spec.points - 1);
        if (spec.var == SweepVar::Rm) {
            records[i] = solve_record(sp, spec.mode, value);
            records[i].sweep_var = "rm";
        } else {
            SystemParams point = sp;
            point.p_r = dbm_to_watts(value);
            records[i] = solve_record(point, spec.mode, spec.r_m);
            records[i].sweep_var = "pr";
        }
        records[i].value = value;
    };

    if (threads <= 1) {
        for (int i = 0; i < spec.points; ++i) compute(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < spec.points; i = next.fetch_add(1)) {
                compute(i);
            }
        };
        std::vector<std::thread> pool;
        const int n_workers = std::min(threads, spec.points);
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string sweep_csv_header() {
    return "sweep_var,value,mode,feasible,ps_star_dbm,prob_star,xi_star,r_c";
}

std::string render_row(const SweepRecord& r) {
    std::string out = r.sweep_var;
    out += ',';
    out += format_number(r.value);
    out += ',';
    out += mode_name(r.mode);
    out += ',';
    out += r.feasible ? '1' : '0';
    for (double v : {r.ps_star_dbm, r.prob_star, r.xi_star, r.r_c}) {
        out += ',';
        out += format_number(v);
    }
    return out;
}

std::string render_csv(const std::vector<SweepRecord>& records) {
    std::string out = sweep_csv_header();
    out += '\n';
    for (const auto& r : records) {
        out += render_row(r);
        out += '\n';
    }
    return out;
}

}  // namespace attcc
