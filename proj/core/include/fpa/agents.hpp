#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "fpa/estimation.hpp"
#include "fpa/formulation.hpp"
#include "fpa/olo.hpp"

namespace fpa {

enum class BidderKind { known_dist, unknown_dist, scripted };

// Everything the bidder commits to at the start of a round, before the
// outcome is known.
struct RoundDecision {
    int bid_index;
    ThresholdStrategy strategy;
    BidProbs q;
    // Unknown-distribution runs only: q' = bid probabilities the strategy
    // actually induces under the estimate, and the confidence radius used.
    std::optional<BidProbs> q_prime;
    double alpha = 0.0;
};

class Bidder {
public:
    static Bidder known(ValueDistribution dist, LearnerKind learner, const BidGrid& grid,
                        double fixed_eta = 0.0);
    static Bidder unknown(double delta, long horizon, LearnerKind learner, const BidGrid& grid,
                          double fixed_eta = 0.0);
    // The negative-regret counterexample script: bid 1/4 above value 1/4 for
    // the first half, then 1/8 below value 1/2 and 1/4 above.
    static Bidder scripted_example1(const BidGrid& grid, long horizon);

    BidderKind kind() const noexcept { return kind_; }

    // Observe the round's value and commit to a bid. Throws if the previous
    // round was not finished.
    RoundDecision begin_round(double v);

    // Reveal the highest competing bid; feeds the learner and returns the
    // q-space gradient used (zero for the scripted bidder). Throws if called
    // before begin_round.
    std::vector<double> finish_round(int h_index);

    const SampleLog* sample_log() const noexcept { return log_ ? &*log_ : nullptr; }

    // Learner iterate ahead of the round (value-independent); feeds the
    // oracle seller variant. Empty for the scripted bidder.
    std::optional<BidProbs> peek_probs() const;

private:
    Bidder(BidderKind kind, BidGrid grid);

    BidderKind kind_;
    BidGrid grid_;
    std::optional<ValueDistribution> dist_;        // known: F
    std::optional<Learner> learner_;
    std::optional<SampleLog> log_;                 // unknown
    std::optional<DominatedEmpirical> estimate_;   // unknown: this round's F-hat
    double delta_ = 0.0;
    long horizon_ = 0;
    long t_ = 0;
    bool in_round_ = false;
    std::optional<BidProbs> round_q_;
};

enum class SellerKind { fixed, schedule, adaptive_greedy };

struct ScheduleEntry {
    long t_start;  // inclusive, 1-based
    long t_end;    // inclusive
    int bid_index;
};

// Lines `t_start<TAB>t_end<TAB>bid_index`.
std::vector<ScheduleEntry> load_schedule(std::istream& in);

class Seller {
public:
    static Seller fixed(int bid_index, const BidGrid& grid);
    static Seller schedule(std::vector<ScheduleEntry> entries, const BidGrid& grid);
    // h = b_2 for t <= T/2, b_1 afterwards; requires the 1/8-spaced grid.
    static Seller example1_schedule(long horizon, const BidGrid& grid);
    // Posts the grid reserve maximizing b_i * P(bid >= b_i) against the
    // observed bid history with add-one smoothing; ties go to the lower
    // index. With oracle = true it scores against the bidder's current q
    // instead (a stress instrument, not something a real seller can see).
    static Seller adaptive_greedy(const BidGrid& grid, bool oracle = false);

    SellerKind kind() const noexcept { return kind_; }

    // Choice for round t; depends only on rounds 1..t-1 (and, in oracle
    // mode, on the bidder's pre-committed q, which is V_t-independent).
    int choose(long t, const BidProbs* bidder_q = nullptr);

    // Record the bidder's realized bid for round t.
    void observe_bid(int bid_index);

private:
    Seller(SellerKind kind, BidGrid grid);

    SellerKind kind_;
    BidGrid grid_;
    int fixed_index_ = 0;
    std::vector<ScheduleEntry> entries_;
    std::vector<long> bid_counts_;
    long observed_ = 0;
    bool oracle_ = false;
};

// The grid hosting Example 1: spacing exactly 1/8 so b_1 = 1/8, b_2 = 1/4.
bool grid_hosts_example1(const BidGrid& grid);

}  // namespace fpa
