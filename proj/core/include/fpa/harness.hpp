#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fpa/agents.hpp"
#include "fpa/distribution.hpp"
#include "fpa/formulation.hpp"
#include "fpa/grid.hpp"

namespace fpa {

struct RoundRecord {
    double value;
    int bid_index;
    int h_index;
    double exp_utility;   // E_v[u | round strategy, h_t] against the true F
    double exp_revenue;   // E_v[Rev | round strategy, h_t]
    double realized_utility;
    double realized_payment;
    double lgrad_dot_q;   // <g_t, q_t>
    double q_qprime_l1;   // unknown-dist runs: ||q_t - q'_t||_1
    double alpha;         // unknown-dist runs: confidence radius used
};

struct EpisodeTrace {
    BidGrid grid;
    ValueDistribution dist;
    std::uint64_t seed = 0;
    double delta = 0.0;
    bool known_dist = true;  // gradients were taken against the true F
    std::vector<RoundRecord> rounds;
    std::vector<long> h_counts;      // K+1 tallies of realized h_t
    std::vector<double> grad_sum;    // sum_t g_t
    double sum_grad_dot_q = 0.0;
    double total_exp_utility = 0.0;
    double total_exp_revenue = 0.0;

    long num_rounds() const noexcept { return static_cast<long>(rounds.size()); }
};

struct EpisodeConfig {
    BidGrid grid;
    ValueDistribution dist;
    long T;
    std::uint64_t seed;
    double delta = 0.0;
};

// T rounds in order: the seller commits h_t from rounds 1..t-1, the value is
// drawn, the bidder commits, payoffs and feedback follow. Deterministic
// given the seed.
EpisodeTrace run_episode(const EpisodeConfig& config, Bidder bidder, Seller seller);

struct BenchmarkResult {
    double value;  // total over T rounds
    ThresholdStrategy strategy;
};

// Best fixed strategy against the realized h frequencies: the upper envelope
// of the lines G_i (v - b_i) with G_i the win probability of bid b_i.
BenchmarkResult hindsight_benchmark(const ValueDistribution& dist,
                                    const std::vector<long>& h_counts, const BidGrid& grid);

struct LinearizedRegret {
    double lregret;        // max over simplex vertices of sum_t <g_t, e_j - q_t>
    double lregret_vs_q0;  // the q^0 specialization (vertex 0)
};

LinearizedRegret linearized_regret(const EpisodeTrace& trace);

// sum_t r_t - Myer(F) * T on the exact expected-revenue ledger.
double robustness_gap(const EpisodeTrace& trace, double myerson);

// max over rounds of r_t + <g_t, q_t> - Myer(F); nonpositive (to rounding)
// for known-distribution traces.
double theorem2_audit(const EpisodeTrace& trace, double myerson);

// Worst round of ||q_t - q'_t||_1 - 2 alpha_t; meaningful for unknown runs.
double lemma6_max_violation(const EpisodeTrace& trace);

struct MetricsReport {
    double total_exp_utility;
    double total_exp_revenue;
    double benchmark;
    double regret_ledger;  // benchmark - total utility
    double lregret;
    double lregret_vs_q0;
    double myer;
    double rev_gap;
    double theorem2_max_violation;
    double lemma6_max_violation;
};

// Pass a cached Myer(F) when running many episodes on one distribution; a
// negative value recomputes it.
MetricsReport compute_metrics(const EpisodeTrace& trace, double myerson = -1.0);

// `t,value,bid_index,h_index,exp_utility,exp_revenue,realized_utility,
// realized_payment,lgrad_dot_q,cum_regret_ledger,cum_rev_gap` with header;
// cum_regret_ledger re-solves the benchmark on the h-prefix each row.
void write_rounds_csv(std::ostream& out, const EpisodeTrace& trace, double myerson = -1.0);

}  // namespace fpa
