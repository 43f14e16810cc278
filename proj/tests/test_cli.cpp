#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fpa/experiment.hpp"

using namespace fpa;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("fpa_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_binary(const std::string& args) {
    const int rc = std::system((std::string(FPA_LAB_BIN) + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config file parsing") {
    auto dir = fresh_dir("cfg");
    write_file(dir / "a.cfg",
               "# comment line\n"
               "dist = example1\n"
               "K = 8\n"
               "eps = 0.125   # trailing comment\n"
               "\n"
               "bidder = scripted-example1\n"
               "seller = example1-schedule\n"
               "T = 100\n"
               "seed = 3\n"
               "seeds = 2\n");
    auto cfg = parse_config_file((dir / "a.cfg").string());
    CHECK(cfg.dist == "example1");
    CHECK(cfg.K == 8);
    CHECK(cfg.eps == doctest::Approx(0.125));
    CHECK(cfg.bidder == "scripted-example1");
    CHECK(cfg.T == 100);
    CHECK(cfg.seed == 3);
    CHECK(cfg.seeds == 2);
    CHECK_FALSE(cfg.delta_set);
    validate(cfg);

    // flags are applied after the file, so they win
    apply_flag(cfg, "T", "250");
    apply_flag(cfg, "delta", "0.1");
    CHECK(cfg.T == 250);
    CHECK(cfg.delta == doctest::Approx(0.1));
    CHECK(cfg.delta_set);

    write_file(dir / "bad.cfg", "K = 8\nT: 100\n");
    try {
        parse_config_file((dir / "bad.cfg").string());
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    write_file(dir / "badkey.cfg", "horizon = 100\n");
    CHECK_THROWS_AS(parse_config_file((dir / "badkey.cfg").string()), ConfigError);
    write_file(dir / "badval.cfg", "K = eight\n");
    CHECK_THROWS_AS(parse_config_file((dir / "badval.cfg").string()), ConfigError);
    CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("validation") {
    ExperimentConfig cfg;  // defaults
    CHECK(cfg.K == 100);
    CHECK(cfg.T == 10000);
    CHECK(cfg.seed == 1);
    validate(cfg);  // defaults are runnable (eps resolves to 1/K)
    CHECK(cfg.make_grid().spacing() == doctest::Approx(0.01));

    auto bad = cfg;
    bad.K = 10;
    bad.eps = 0.2;  // K*eps = 2 > 1
    CHECK_THROWS_AS(validate(bad), ConfigError);

    auto unknown = cfg;
    unknown.bidder = "unknown-mwu";
    CHECK_THROWS_AS(validate(unknown), ConfigError);  // needs an explicit delta
    unknown.delta = 0.1;
    unknown.delta_set = true;
    unknown.T = 10;
    validate(unknown);
    unknown.delta = 1.5;
    CHECK_THROWS_AS(validate(unknown), ConfigError);

    auto weird = cfg;
    weird.dist = "gaussian";
    CHECK_THROWS_AS(validate(weird), ConfigError);
    weird.dist = "equirevenue:0.2";
    validate(weird);
    weird.seller = "fixed:200";
    CHECK_THROWS_AS(validate(weird), ConfigError);
    weird.seller = "lowball";
    CHECK_THROWS_AS(validate(weird), ConfigError);
    auto negative = cfg;
    negative.T = -1;
    CHECK_THROWS_AS(validate(negative), ConfigError);
}

TEST_CASE("counterexample reproduction end to end") {
    ExperimentConfig cfg;
    cfg.dist = "example1";
    cfg.K = 8;
    cfg.eps = 0.125;
    cfg.bidder = "scripted-example1";
    cfg.seller = "example1-schedule";
    cfg.T = 10000;
    cfg.seed = 7;
    auto dir = fresh_dir("repro");
    cfg.out_dir = dir.string();

    auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    REQUIRE(res.rows.size() == 1);
    const auto& row = res.rows[0];
    CHECK(row.regret_ledger / cfg.T <= -0.009);
    CHECK(row.rev_gap / cfg.T == doctest::Approx(0.015625).epsilon(1e-9));
    CHECK(row.myer == doctest::Approx(0.125).epsilon(1e-9));

    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(fs::exists(dir / "rounds_seed7.csv"));
    CHECK(audit_directory(dir.string()) == 0);

    // byte-identical rerun
    auto dir2 = fresh_dir("repro2");
    cfg.out_dir = dir2.string();
    run_experiment(cfg);
    CHECK(slurp(dir / "summary.csv") == slurp(dir2 / "summary.csv"));
    CHECK(slurp(dir / "rounds_seed7.csv") == slurp(dir2 / "rounds_seed7.csv"));

    // a tampered ledger row (revenue beyond the recorded margin) is caught
    {
        std::ofstream rf(dir / "rounds_seed7.csv", std::ios::app);
        rf << "10001,0.5,2,2,0.1,9.9,0.1,0.25,0,0,0\n";
    }
    CHECK(audit_directory(dir.string()) == 1);
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("learner holds the revenue line against an adaptive seller") {
    ExperimentConfig cfg;
    cfg.dist = "example1";
    cfg.K = 8;
    cfg.eps = 0.125;
    cfg.bidder = "known-mwu";
    cfg.seller = "adaptive-greedy";
    cfg.T = 1000;
    auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    const auto& row = res.rows[0];
    CHECK(row.theorem2_max_violation <= 1e-9);
    CHECK(row.rev_gap <= row.lregret_vs_q0 + 1e-8);
    CHECK(row.regret_ledger <= row.lregret + 1e-8);
}

TEST_CASE("degenerate horizons") {
    ExperimentConfig cfg;
    cfg.T = 0;
    cfg.K = 4;
    auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.rows[0].T == 0);
    CHECK(res.rows[0].regret_ledger == 0.0);
}

TEST_CASE("unknown runs leave auditable artifacts") {
    ExperimentConfig cfg;
    cfg.dist = "uniform";
    cfg.K = 8;
    cfg.eps = 0.125;
    cfg.bidder = "unknown-mwu";
    cfg.seller = "fixed:2";
    cfg.T = 300;
    cfg.delta = 0.1;
    cfg.delta_set = true;
    cfg.seeds = 2;
    auto dir = fresh_dir("unknown");
    cfg.out_dir = dir.string();
    auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir / "lemma6_seed1.csv"));
    CHECK(fs::exists(dir / "lemma6_seed2.csv"));
    for (const auto& row : res.rows) CHECK(row.lemma6_max_violation <= 1e-12);
    CHECK(audit_directory(dir.string()) == 0);

    // corrupt a recorded margin; the audit must notice
    {
        std::ofstream lf(dir / "lemma6_seed2.csv");
        lf << "t,q_qprime_l1,alpha\n1,2.0,0.25\n";
    }
    CHECK(audit_directory(dir.string()) == 1);
    fs::remove_all(dir);
    CHECK_THROWS_AS(audit_directory((dir / "nope").string()), ConfigError);
}

TEST_CASE("sweep scaling table") {
    ExperimentConfig cfg;
    cfg.dist = "example1";
    cfg.K = 8;
    cfg.eps = 0.125;
    cfg.bidder = "known-mwu";
    cfg.seller = "fixed:1";
    auto dir = fresh_dir("sweep");
    cfg.out_dir = dir.string();
    auto table = sweep(cfg, {256, 512, 1024, 2048});
    CHECK(table.exit_code == 0);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[0].T == 256);
    CHECK(table.rows[3].T == 2048);
    // sublinear growth: the log-log slope is well below 1
    CHECK(table.slope > 0.0);
    CHECK(table.slope < 0.9);
    CHECK(fs::exists(dir / "scaling.csv"));
    std::ifstream in(dir / "scaling.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "T,regret_ledger,lregret,rev_gap,slope");
    fs::remove_all(dir);

    auto empty = sweep(cfg, {});
    CHECK(empty.rows.empty());
    CHECK(empty.slope == 0.0);
}

TEST_CASE("binary exit codes") {
    auto dir = fresh_dir("bin");
    write_file(dir / "ok.cfg",
               "dist = example1\nK = 8\neps = 0.125\nbidder = scripted-example1\n"
               "seller = example1-schedule\nT = 50\n");
    CHECK(run_binary("run --config " + (dir / "ok.cfg").string() + " --out " +
                     (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "summary.csv"));
    CHECK(run_binary("audit " + (dir / "out").string()) == 0);
    // flag overrides reach the run
    CHECK(run_binary("run --config " + (dir / "ok.cfg").string() + " --T 10") == 0);
    // invalid configuration is exit code 2
    CHECK(run_binary("run --config " + (dir / "ok.cfg").string() + " --K 10 --eps 0.2") == 2);
    write_file(dir / "bad.cfg", "K = ten\n");
    CHECK(run_binary("run --config " + (dir / "bad.cfg").string()) == 2);
    CHECK(run_binary("run --config " + (dir / "absent.cfg").string()) == 2);
    CHECK(run_binary("sweep --config " + (dir / "ok.cfg").string() + " --horizons 64,128") == 0);
    fs::remove_all(dir);
}
