#include "fpa/agents.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fpa {

Bidder::Bidder(BidderKind kind, BidGrid grid) : kind_(kind), grid_(grid) {}

Bidder Bidder::known(ValueDistribution dist, LearnerKind learner, const BidGrid& grid,
                     double fixed_eta) {
    Bidder b(BidderKind::known_dist, grid);
    b.dist_ = std::move(dist);
    b.learner_.emplace(learner, grid, fixed_eta);
    return b;
}

Bidder Bidder::unknown(double delta, long horizon, LearnerKind learner, const BidGrid& grid,
                       double fixed_eta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("Bidder::unknown: delta must lie in (0,1)");
    if (horizon < 1) throw std::invalid_argument("Bidder::unknown: horizon must be >= 1");
    if (learner == LearnerKind::oga_polytope)
        throw std::invalid_argument("Bidder::unknown: polytope learner not supported");
    Bidder b(BidderKind::unknown_dist, grid);
    b.delta_ = delta;
    b.horizon_ = horizon;
    b.learner_.emplace(learner, grid, fixed_eta);
    b.log_.emplace();
    return b;
}

Bidder Bidder::scripted_example1(const BidGrid& grid, long horizon) {
    if (!grid_hosts_example1(grid))
        throw std::invalid_argument("scripted_example1: grid spacing must be 1/8 with K >= 2");
    Bidder b(BidderKind::scripted, grid);
    b.horizon_ = horizon;
    return b;
}

RoundDecision Bidder::begin_round(double v) {
    if (in_round_) throw std::logic_error("begin_round: previous round not finished");
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("begin_round: value outside [0,1]");
    in_round_ = true;
    ++t_;
    switch (kind_) {
        case BidderKind::known_dist: {
            BidProbs q = learner_->polytope_domain()
                             ? quantiles_to_probs(learner_->next_quantiles())
                             : learner_->next_probs();
            ThresholdStrategy s = strategy_from_probs(q, *dist_);
            round_q_ = q;
            return {s.bid_index(v), std::move(s), std::move(q), std::nullopt, 0.0};
        }
        case BidderKind::unknown_dist: {
            log_->insert(v);
            estimate_ = dominated_cdf(*log_, delta_ / static_cast<double>(horizon_));
            BidProbs q = learner_->next_probs();
            ThresholdStrategy s = strategy_from_probs(q, estimate_->hat);
            BidProbs qp = probs_of_strategy(s, estimate_->hat);
            round_q_ = q;
            return {s.bid_index(v), std::move(s), std::move(q), std::move(qp), estimate_->alpha};
        }
        case BidderKind::scripted: {
            const int k = grid_.num_positive_bids();
            std::vector<double> thr(k + 2, 1.0);
            thr[0] = 0.0;
            if (2 * t_ <= horizon_) {
                thr[1] = thr[2] = 0.25;  // bid 1/4 above 1/4, else 0
            } else {
                thr[1] = 0.0;  // bid 1/8 on (0, 1/2], 1/4 above
                thr[2] = 0.5;
            }
            ThresholdStrategy s{std::move(thr)};
            BidProbs q = probs_of_strategy(s, ValueDistribution::example1());
            round_q_ = q;
            return {s.bid_index(v), std::move(s), std::move(q), std::nullopt, 0.0};
        }
    }
    throw std::logic_error("begin_round: unreachable");
}

std::vector<double> Bidder::finish_round(int h_index) {
    if (!in_round_) throw std::logic_error("finish_round: no round in progress");
    if (!grid_.valid_index(h_index)) throw std::out_of_range("finish_round: h index out of range");
    in_round_ = false;
    switch (kind_) {
        case BidderKind::known_dist: {
            if (learner_->polytope_domain()) {
                learner_->update(gradient_p(probs_to_quantiles(*round_q_), *dist_, h_index, grid_));
            } else {
                std::vector<double> g = gradient_q(*round_q_, *dist_, h_index, grid_);
                learner_->update(g);
                return g;
            }
            return gradient_q(*round_q_, *dist_, h_index, grid_);
        }
        case BidderKind::unknown_dist: {
            std::vector<double> g = gradient_q(*round_q_, estimate_->hat, h_index, grid_);
            learner_->update(g);
            return g;
        }
        case BidderKind::scripted:
            return std::vector<double>(grid_.num_bids(), 0.0);
    }
    throw std::logic_error("finish_round: unreachable");
}

std::optional<BidProbs> Bidder::peek_probs() const {
    if (!learner_) return std::nullopt;
    return learner_->polytope_domain() ? quantiles_to_probs(learner_->next_quantiles())
                                       : learner_->next_probs();
}

std::vector<ScheduleEntry> load_schedule(std::istream& in) {
    std::vector<ScheduleEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        ScheduleEntry e{};
        if (!(ls >> e.t_start >> e.t_end >> e.bid_index))
            throw std::invalid_argument("schedule line " + std::to_string(lineno) +
                                        ": expected t_start, t_end, bid_index");
        if (e.t_start < 1 || e.t_end < e.t_start)
            throw std::invalid_argument("schedule line " + std::to_string(lineno) +
                                        ": bad round range");
        entries.push_back(e);
    }
    return entries;
}

Seller::Seller(SellerKind kind, BidGrid grid) : kind_(kind), grid_(grid) {}

Seller Seller::fixed(int bid_index, const BidGrid& grid) {
    if (!grid.valid_index(bid_index)) throw std::out_of_range("Seller::fixed: bad bid index");
    Seller s(SellerKind::fixed, grid);
    s.fixed_index_ = bid_index;
    return s;
}

Seller Seller::schedule(std::vector<ScheduleEntry> entries, const BidGrid& grid) {
    Seller s(SellerKind::schedule, grid);
    for (const auto& e : entries)
        if (!grid.valid_index(e.bid_index))
            throw std::out_of_range("Seller::schedule: bid index off the grid");
    s.entries_ = std::move(entries);
    return s;
}

Seller Seller::example1_schedule(long horizon, const BidGrid& grid) {
    if (!grid_hosts_example1(grid))
        throw std::invalid_argument("example1_schedule: grid spacing must be 1/8 with K >= 2");
    const long half = horizon / 2;
    std::vector<ScheduleEntry> entries;
    if (half >= 1) entries.push_back({1, half, 2});
    if (horizon > half) entries.push_back({half + 1, horizon, 1});
    return schedule(std::move(entries), grid);
}

Seller Seller::adaptive_greedy(const BidGrid& grid, bool oracle) {
    Seller s(SellerKind::adaptive_greedy, grid);
    s.bid_counts_.assign(grid.num_bids(), 0);
    s.oracle_ = oracle;
    return s;
}

int Seller::choose(long t, const BidProbs* bidder_q) {
    switch (kind_) {
        case SellerKind::fixed:
            return fixed_index_;
        case SellerKind::schedule:
            for (const auto& e : entries_)
                if (t >= e.t_start && t <= e.t_end) return e.bid_index;
            throw std::out_of_range("Seller::choose: round not covered by the schedule");
        case SellerKind::adaptive_greedy: {
            if (oracle_ && bidder_q == nullptr)
                throw std::invalid_argument("Seller::choose: oracle mode needs the bidder's q");
            const int n = grid_.num_bids();
            // b_i * P(bid >= b_i) under the smoothed empirical bid history
            // (or under the bidder's q in oracle mode).
            int best = 0;
            double best_value = -1.0;
            double tail_count = observed_ + static_cast<double>(n);
            double tail_q = 1.0;
            for (int i = 0; i < n; ++i) {
                if (i > 0) {
                    tail_count -= bid_counts_[i - 1] + 1.0;
                    if (oracle_) tail_q -= (*bidder_q)[i - 1];
                }
                const double win = oracle_ ? std::max(tail_q, 0.0)
                                           : tail_count / (observed_ + static_cast<double>(n));
                const double value = grid_.bid(i) * win;
                if (value > best_value + 1e-15) {
                    best_value = value;
                    best = i;
                }
            }
            return best;
        }
    }
    throw std::logic_error("Seller::choose: unreachable");
}

void Seller::observe_bid(int bid_index) {
    if (!grid_.valid_index(bid_index)) throw std::out_of_range("observe_bid: bad bid index");
    if (kind_ != SellerKind::adaptive_greedy) return;
    ++bid_counts_[bid_index];
    ++observed_;
}

bool grid_hosts_example1(const BidGrid& grid) {
    return grid.num_positive_bids() >= 2 && std::abs(grid.spacing() - 0.125) < 1e-12;
}

}  // namespace fpa
