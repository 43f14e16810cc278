#pragma once

#include <vector>

#include "fpa/distribution.hpp"
#include "fpa/grid.hpp"

namespace fpa {

// Bidding probabilities q over the K+1 grid bids: q[i] = P(bid = b_i).
// Simplex membership is validated at construction (tolerance 1e-12, then
// renormalized); anything further off is rejected.
class BidProbs {
public:
    explicit BidProbs(std::vector<double> q);

    static BidProbs corner_zero_bid(int num_bids);  // q^0 = (1, 0, ..., 0)
    static BidProbs uniform(int num_bids);

    int size() const noexcept { return static_cast<int>(q_.size()); }
    double operator[](int i) const { return q_[i]; }
    const std::vector<double>& values() const noexcept { return q_; }

    // Sum of the first i coordinates, with exact endpoints: 0 at i = 0 and
    // 1 at i = size().
    double prefix_sum(int i) const;

private:
    std::vector<double> q_;
};

// Bidding quantiles p_1..p_K with implicit p_0 = 1, p_{K+1} = 0; must satisfy
// 1 >= p_1 >= ... >= p_K >= 0.
class BidQuantiles {
public:
    explicit BidQuantiles(std::vector<double> p);

    static BidQuantiles zeros(int k) { return BidQuantiles(std::vector<double>(k, 0.0)); }

    int size() const noexcept { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[i]; }  // i in [0, K): p_{i+1}
    const std::vector<double>& values() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

// Distribution d over the highest competing bid's grid index.
class CompetingBidDist {
public:
    explicit CompetingBidDist(std::vector<double> weights);

    static CompetingBidDist point_mass(int index, int num_bids);

    int size() const noexcept { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[i]; }
    const std::vector<double>& weights() const noexcept { return w_; }

private:
    std::vector<double> w_;
};

// Non-decreasing, left-continuous map value -> bid index, stored as the
// K+2 thresholds v_0 = 0 <= v_1 <= ... <= v_K <= v_{K+1} = 1: bid index i on
// (v_i, v_{i+1}], bid 0 at v = 0.
class ThresholdStrategy {
public:
    explicit ThresholdStrategy(std::vector<double> thresholds);

    static ThresholdStrategy constant(int bid_index, int num_positive_bids);

    int num_positive_bids() const noexcept { return static_cast<int>(v_.size()) - 2; }
    double threshold(int i) const { return v_.at(i); }
    const std::vector<double>& thresholds() const noexcept { return v_; }

    int bid_index(double value) const;

private:
    std::vector<double> v_;
};

BidProbs quantiles_to_probs(const BidQuantiles& p);
BidQuantiles probs_to_quantiles(const BidProbs& q);

// u(q | F, d), eq. (u_Q): sum_i d_i ( int_{cum_i}^1 F^-(u) du - sum_{j>=i} b_j q_{j+1} ).
double utility_q(const BidProbs& q, const ValueDistribution& dist, const CompetingBidDist& d,
                 const BidGrid& grid);

// Rev(q | d): sum_i d_i sum_{j>=i} b_j q_{j+1}.
double revenue_q(const BidProbs& q, const CompetingBidDist& d, const BidGrid& grid);

// Simplex-space utility gradient at highest competing bid b_{h_index}:
// coordinate j is 0 for j <= i and F^-(cum_i) - b_{j-1} for j > i.
std::vector<double> gradient_q(const BidProbs& q, const ValueDistribution& dist, int h_index,
                               const BidGrid& grid);

// Quantile-space gradient: 0 below i, F^-(1 - p_i) - b_i at i, -eps above.
std::vector<double> gradient_p(const BidQuantiles& p, const ValueDistribution& dist, int h_index,
                               const BidGrid& grid);

// Revenue in quantile space against a point mass at b_{h_index}:
// b_i p_i + eps * sum_{j > i} p_j.
double revenue_p(const BidQuantiles& p, int h_index, const BidGrid& grid);

// Thresholds v_i = F^-(sum_{l <= i} q_l).
ThresholdStrategy strategy_from_probs(const BidProbs& q, const ValueDistribution& dist);

// q_j = P_{v ~ F}(s(v) = b_{j-1}); an atom of F at zero counts toward bid 0.
BidProbs probs_of_strategy(const ThresholdStrategy& s, const ValueDistribution& dist);

// Closed-form u(s | F, d) via the threshold representation.
double strategy_utility(const ThresholdStrategy& s, const ValueDistribution& dist,
                        const CompetingBidDist& d, const BidGrid& grid);

// Rev(s | F, d) = sum_i d_i sum_{j >= i} b_j P(s(v) = b_j).
double strategy_revenue(const ThresholdStrategy& s, const ValueDistribution& dist,
                        const CompetingBidDist& d, const BidGrid& grid);

}  // namespace fpa
