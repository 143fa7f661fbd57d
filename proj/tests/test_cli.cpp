// Integration tests for the command-line tool (spawned as a subprocess) and
// for the sweep/verify layers it wraps.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "attcc/sweep.hpp"
#include "attcc/verify.hpp"
#include "test_support.hpp"

using namespace attcc;

namespace {

std::string bin_path() {
    const char* p = std::getenv("ATTCC_BIN");
    REQUIRE(p != nullptr);
    return p;
}

std::string config_path() {
    const char* p = std::getenv("ATTCC_CONFIG");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_stdout.tmp";
    const std::string cmd = bin_path() + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_file);
    std::ostringstream text;
    text << in.rdbuf();
    r.out = text.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("solve exit codes and row shape") {
    const auto feasible = run("solve --config " + config_path() + " --mode cpcc --rm 1e-4");
    CHECK(feasible.exit_code == 0);
    const auto fields = split(feasible.out.substr(0, feasible.out.find('\n')), ',');
    REQUIRE(fields.size() == 8);
    CHECK(fields[0] == "rm");
    CHECK(fields[2] == "cpcc");
    CHECK(fields[3] == "1");
    const double xi = std::stod(fields[6]);
    CHECK(xi == doctest::Approx(0.5).epsilon(2e-3));

    const auto infeasible = run("solve --config " + config_path() + " --mode wpcc --rm 0.95");
    CHECK(infeasible.exit_code == 2);
    const auto zfields = split(infeasible.out.substr(0, infeasible.out.find('\n')), ',');
    REQUIRE(zfields.size() == 8);
    CHECK(zfields[3] == "0");
    for (int i : {4, 5, 6, 7}) CHECK(std::stod(zfields[i]) == 0.0);

    CHECK(run("solve --config /nonexistent.conf --mode wpcc --rm 0.5").exit_code == 1);
    CHECK(run("solve --config " + config_path() + " --mode bogus --rm 0.5").exit_code == 1);
    CHECK(run("solve --config " + config_path() + " --mode wpcc").exit_code == 1);
}

TEST_CASE("solve row is reproducible from the library") {
    const auto res = run("solve --config " + config_path() + " --mode wpcc --rm 0.5");
    CHECK(res.exit_code == 0);
    const SystemParams sp = load_params(test::section5_config_text());
    const auto rec = solve_record(sp, Mode::Wpcc, 0.5);
    CHECK(res.out == render_row(rec) + "\n");
}

TEST_CASE("bad config file contents") {
    {
        std::ofstream bad("bad_config.tmp");
        bad << "eta=0.8\nwhat_is_this=1\n";
    }
    CHECK(run("solve --config bad_config.tmp --mode wpcc --rm 0.5").exit_code == 1);
    std::remove("bad_config.tmp");
}

TEST_CASE("sweep output file") {
    const std::string out = "sweep_test.tmp";
    const auto res = run("sweep --config " + config_path() +
                         " --mode wpcc --var rm --from 0.1 --to 0.6 --points 2 --out " + out);
    CHECK(res.exit_code == 0);
    const std::string content = slurp(out);
    const auto lines = split(content, '\n');
    REQUIRE(lines.size() == 4);  // header + 2 rows + trailing empty
    CHECK(lines[0] == "sweep_var,value,mode,feasible,ps_star_dbm,prob_star,xi_star,r_c");
    CHECK(split(lines[1], ',')[1] == "0.1");
    CHECK(split(lines[2], ',')[1] == "0.6");

    // Byte-identical rerun.
    const std::string out2 = "sweep_test2.tmp";
    run("sweep --config " + config_path() +
        " --mode wpcc --var rm --from 0.1 --to 0.6 --points 2 --out " + out2);
    CHECK(slurp(out2) == content);
    std::remove(out.c_str());
    std::remove(out2.c_str());

    CHECK(run("sweep --config " + config_path() +
              " --mode wpcc --var rm --from 0.1 --to 0.6 --points 2 --out /no/such/dir/x.csv")
              .exit_code == 1);
}

TEST_CASE("sweep determinism across thread counts") {
    const SystemParams sp = load_params(test::section5_config_text());
    SweepSpec spec;
    spec.mode = Mode::Wpcc;
    spec.var = SweepVar::Rm;
    spec.from = 0.02;
    spec.to = 1.0;
    spec.points = 40;
    const std::string one = render_csv(run_sweep(sp, spec, 1));
    const std::string two = render_csv(run_sweep(sp, spec, 2));
    const std::string eight = render_csv(run_sweep(sp, spec, 8));
    CHECK(one == two);
    CHECK(one == eight);

    SweepSpec pr;
    pr.mode = Mode::Cpcc;
    pr.var = SweepVar::Pr;
    pr.from = 0.0;
    pr.to = 50.0;
    pr.points = 25;
    pr.r_m = 0.5;
    CHECK(render_csv(run_sweep(sp, pr, 1)) == render_csv(run_sweep(sp, pr, 8)));
}

TEST_CASE("sweep rows reproducible from the corresponding solver") {
    const SystemParams sp = load_params(test::section5_config_text());
    SweepSpec spec;
    spec.mode = Mode::Cpcc;
    spec.var = SweepVar::Pr;
    spec.from = 10.0;
    spec.to = 40.0;
    spec.points = 4;
    const auto rows = run_sweep(sp, spec, 2);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        SystemParams point = sp;
        point.p_r = dbm_to_watts(row.value);
        const auto direct = solve_record(point, Mode::Cpcc, spec.r_m);
        CHECK(row.feasible == direct.feasible);
        CHECK(row.xi_star == direct.xi_star);
        CHECK(row.r_c == direct.r_c);
    }
}

TEST_CASE("verify runs, reports schema, and fails only on the known checks") {
    const std::string out = "verify_test.tmp";
    const auto res = run("verify --config " + config_path() +
                         " --seed 7 --slots 20000 --trials 20000 --out " + out);
    // The prior-transmit-probability closed form disagrees with the protocol
    // simulation for p < 1 (see README), so verify exits 3 on those checks.
    CHECK(res.exit_code == 3);
    const std::string content = slurp(out);
    const auto lines = split(content, '\n');
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "check_name,statistic,threshold,pass");
    int fail_rows = 0;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        REQUIRE(f.size() == 4);
        CHECK((f[3] == "1" || f[3] == "0" || f[3] == "skip"));
        if (f[3] == "0") {
            ++fail_rows;
            const bool known_family = f[0].rfind("thm1_q_", 0) == 0 ||
                                      f[0].rfind("gap_mean_", 0) == 0;
            CHECK(known_family);
            CHECK(f[0].find("_p1") == std::string::npos);  // p = 1 rows pass
        }
    }
    CHECK(fail_rows > 0);

    // Byte-identical rerun with the same seed.
    const std::string out2 = "verify_test2.tmp";
    run("verify --config " + config_path() +
        " --seed 7 --slots 20000 --trials 20000 --out " + out2);
    CHECK(slurp(out2) == content);
    std::remove(out.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("verify marks under-powered distribution checks as skipped") {
    const SystemParams sp = load_params(test::section5_config_text());
    VerifyOptions opts;
    opts.seed = 7;
    opts.n_slots = 10;
    opts.n_trials = 50;
    const auto report = run_verification(sp, opts);
    bool saw_skip = false;
    for (const auto& c : report.checks) {
        if (c.name == "lemma1_residual_ks" || c.name == "lemma2_gap_poisson") {
            CHECK(c.status == -1);
            saw_skip = true;
        }
    }
    CHECK(saw_skip);
}

TEST_CASE("verify determinism across thread counts") {
    const SystemParams sp = load_params(test::section5_config_text());
    VerifyOptions opts;
    opts.seed = 11;
    opts.n_slots = 30'000;
    opts.n_trials = 30'000;
    opts.threads = 1;
    const auto one = render_csv(run_verification(sp, opts));
    opts.threads = 8;
    const auto eight = render_csv(run_verification(sp, opts));
    CHECK(one == eight);
}
