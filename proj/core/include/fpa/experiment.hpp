#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/harness.hpp"

namespace fpa {

// Invalid configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string dist = "uniform";    // uniform | example1 | equirevenue:<a> | plcdf:<path>
    int K = 100;
    double eps = 0.0;                // 0 resolves to 1/K
    std::string bidder = "known-mwu";
    // known-mwu | known-ftrl | known-oga | known-oga-polytope | unknown-mwu |
    // unknown-oga | scripted-example1
    std::string seller = "fixed:0";  // fixed:<i> | schedule:<path> | example1-schedule |
                                     // adaptive-greedy | adaptive-greedy-oracle
    long T = 10000;
    double delta = 0.05;
    bool delta_set = false;          // unknown bidders require an explicit delta
    std::uint64_t seed = 1;
    int seeds = 1;
    std::string out_dir;             // empty: keep results in memory only
    double eta = 0.0;                // learner step-size override, 0 = schedule

    BidGrid make_grid() const;
    ValueDistribution make_dist() const;
    Bidder make_bidder() const;
    Seller make_seller() const;
};

// Flat `key = value` file; unknown keys and malformed values raise
// ConfigError with the line number.
ExperimentConfig parse_config_file(const std::string& path);

// `--key value` pairs; applied on top of cfg, so flags win over the file.
void apply_flag(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Throws ConfigError on violated constraints (K*eps <= 1, T >= 0, ...).
void validate(const ExperimentConfig& cfg);

struct SeedSummary {
    std::uint64_t seed;
    long T;
    int K;
    double regret_ledger;
    double lregret;
    double lregret_vs_q0;
    double rev_gap;
    double myer;
    double benchmark;
    double theorem2_max_violation;
    double lemma6_max_violation;
    bool known_dist;
};

struct ExperimentResult {
    std::vector<SeedSummary> rows;
    int exit_code;  // 0 ok, 1 audited invariant violated
};

// Runs config.seeds episodes on seeds seed, seed+1, ...; writes
// rounds_seed<seed>.csv per seed plus summary.csv when out_dir is set.
// FPA_LAB_THREADS caps the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct ScalingRow {
    long T;
    double regret_ledger;
    double lregret;
    double rev_gap;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    double slope;  // least-squares log-log slope of lregret vs T
    int exit_code;
};

// One run per horizon; writes scaling.csv when out_dir is set.
ScalingTable sweep(const ExperimentConfig& config, const std::vector<long>& horizons);

// Re-checks theorem2 (from rounds_seed*.csv + summary.csv) and the recorded
// Lemma-6 margins (lemma6_seed*.csv) in an output directory.
int audit_directory(const std::string& dir);

}  // namespace fpa
