#include "fpa/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fpa {
namespace {

constexpr double kMembershipTol = 1e-12;

void check_dim(int got, int want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

BidProbs::BidProbs(std::vector<double> q) : q_(std::move(q)) {
    if (q_.empty()) throw std::invalid_argument("BidProbs: empty vector");
    double sum = 0.0;
    for (double& x : q_) {
        if (x < -kMembershipTol) throw std::invalid_argument("BidProbs: negative coordinate");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::abs(sum - 1.0) > kMembershipTol)
        throw std::invalid_argument("BidProbs: coordinates do not sum to 1");
    for (double& x : q_) x /= sum;
}

BidProbs BidProbs::corner_zero_bid(int num_bids) {
    std::vector<double> q(num_bids, 0.0);
    q.at(0) = 1.0;
    return BidProbs(std::move(q));
}

BidProbs BidProbs::uniform(int num_bids) {
    return BidProbs(std::vector<double>(num_bids, 1.0 / num_bids));
}

double BidProbs::prefix_sum(int i) const {
    if (i < 0 || i > size()) throw std::out_of_range("BidProbs::prefix_sum");
    if (i == 0) return 0.0;
    if (i == size()) return 1.0;
    return std::clamp(std::accumulate(q_.begin(), q_.begin() + i, 0.0), 0.0, 1.0);
}

BidQuantiles::BidQuantiles(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("BidQuantiles: empty vector");
    double prev = 1.0;
    for (double& x : p_) {
        if (x < -kMembershipTol || x > prev + kMembershipTol)
            throw std::invalid_argument("BidQuantiles: not in the quantile polytope");
        x = std::clamp(x, 0.0, prev);
        prev = x;
    }
}

CompetingBidDist::CompetingBidDist(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("CompetingBidDist: empty vector");
    double sum = 0.0;
    for (double& x : w_) {
        if (x < -kMembershipTol) throw std::invalid_argument("CompetingBidDist: negative weight");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::abs(sum - 1.0) > kMembershipTol)
        throw std::invalid_argument("CompetingBidDist: weights do not sum to 1");
    for (double& x : w_) x /= sum;
}

CompetingBidDist CompetingBidDist::point_mass(int index, int num_bids) {
    if (index < 0 || index >= num_bids)
        throw std::out_of_range("CompetingBidDist::point_mass: index out of range");
    std::vector<double> w(num_bids, 0.0);
    w[index] = 1.0;
    return CompetingBidDist(std::move(w));
}

ThresholdStrategy::ThresholdStrategy(std::vector<double> thresholds) : v_(std::move(thresholds)) {
    if (v_.size() < 2) throw std::invalid_argument("ThresholdStrategy: need at least two thresholds");
    if (std::abs(v_.front()) > kMembershipTol || std::abs(v_.back() - 1.0) > kMembershipTol)
        throw std::invalid_argument("ThresholdStrategy: thresholds must span [0,1]");
    v_.front() = 0.0;
    v_.back() = 1.0;
    double prev = 0.0;
    for (double& x : v_) {
        if (x < prev - kMembershipTol)
            throw std::invalid_argument("ThresholdStrategy: thresholds must be non-decreasing");
        x = std::clamp(x, prev, 1.0);
        prev = x;
    }
}

ThresholdStrategy ThresholdStrategy::constant(int bid_index, int num_positive_bids) {
    if (bid_index < 0 || bid_index > num_positive_bids)
        throw std::out_of_range("ThresholdStrategy::constant: bid index out of range");
    std::vector<double> v(num_positive_bids + 2, 1.0);
    for (int i = 0; i <= bid_index; ++i) v[i] = 0.0;
    return ThresholdStrategy(std::move(v));
}

int ThresholdStrategy::bid_index(double value) const {
    if (value < 0.0 || value > 1.0)
        throw std::domain_error("ThresholdStrategy::bid_index: value outside [0,1]");
    if (value == 0.0) return 0;
    // Largest i with v_i < value; left-continuity puts a value equal to a
    // threshold into the lower interval.
    auto it = std::lower_bound(v_.begin(), v_.end(), value);
    auto i = static_cast<int>(it - v_.begin()) - 1;
    return std::clamp(i, 0, num_positive_bids());
}

BidProbs quantiles_to_probs(const BidQuantiles& p) {
    const int k = p.size();
    std::vector<double> q(k + 1);
    q[0] = 1.0 - p[0];
    for (int i = 1; i < k; ++i) q[i] = p[i - 1] - p[i];
    q[k] = p[k - 1];
    return BidProbs(std::move(q));
}

BidQuantiles probs_to_quantiles(const BidProbs& q) {
    const int k = q.size() - 1;
    std::vector<double> p(k);
    double suffix = 0.0;
    for (int i = k - 1; i >= 0; --i) {
        suffix += q[i + 1];
        p[i] = std::min(suffix, 1.0);
    }
    return BidQuantiles(std::move(p));
}

double utility_q(const BidProbs& q, const ValueDistribution& dist, const CompetingBidDist& d,
                 const BidGrid& grid) {
    check_dim(q.size(), grid.num_bids(), "utility_q: q");
    check_dim(d.size(), grid.num_bids(), "utility_q: d");
    const int k = grid.num_positive_bids();
    // pay[i] = sum_{j >= i} b_j q_{j+1}: expected payment when h = b_i.
    std::vector<double> pay(k + 2, 0.0);
    for (int j = k; j >= 0; --j) pay[j] = pay[j + 1] + grid.bid(j) * q[j];
    double total = 0.0;
    for (int i = 0; i <= k; ++i) {
        if (d[i] == 0.0) continue;
        total += d[i] * (dist.quantile_integral(q.prefix_sum(i), 1.0) - pay[i]);
    }
    return total;
}

double revenue_q(const BidProbs& q, const CompetingBidDist& d, const BidGrid& grid) {
    check_dim(q.size(), grid.num_bids(), "revenue_q: q");
    check_dim(d.size(), grid.num_bids(), "revenue_q: d");
    const int k = grid.num_positive_bids();
    double total = 0.0;
    double pay = 0.0;
    for (int i = k; i >= 0; --i) {
        pay += grid.bid(i) * q[i];
        total += d[i] * pay;
    }
    return total;
}

std::vector<double> gradient_q(const BidProbs& q, const ValueDistribution& dist, int h_index,
                               const BidGrid& grid) {
    check_dim(q.size(), grid.num_bids(), "gradient_q: q");
    if (!grid.valid_index(h_index)) throw std::out_of_range("gradient_q: h index out of range");
    const double fq = dist.quantile(q.prefix_sum(h_index));
    std::vector<double> g(q.size(), 0.0);
    for (int j = h_index; j < q.size(); ++j) g[j] = fq - grid.bid(j);
    return g;
}

std::vector<double> gradient_p(const BidQuantiles& p, const ValueDistribution& dist, int h_index,
                               const BidGrid& grid) {
    check_dim(p.size(), grid.num_positive_bids(), "gradient_p: p");
    if (!grid.valid_index(h_index)) throw std::out_of_range("gradient_p: h index out of range");
    std::vector<double> g(p.size(), 0.0);
    for (int j = h_index; j < p.size(); ++j) g[j] = -grid.spacing();
    if (h_index >= 1)
        g[h_index - 1] = dist.quantile(1.0 - p[h_index - 1]) - grid.bid(h_index);
    return g;
}

double revenue_p(const BidQuantiles& p, int h_index, const BidGrid& grid) {
    check_dim(p.size(), grid.num_positive_bids(), "revenue_p: p");
    if (!grid.valid_index(h_index)) throw std::out_of_range("revenue_p: h index out of range");
    double total = (h_index >= 1) ? grid.bid(h_index) * p[h_index - 1] : 0.0;
    for (int j = h_index; j < p.size(); ++j) total += grid.spacing() * p[j];
    return total;
}

ThresholdStrategy strategy_from_probs(const BidProbs& q, const ValueDistribution& dist) {
    const int k = q.size() - 1;
    std::vector<double> v(k + 2);
    v[0] = 0.0;
    double cum = 0.0;
    for (int i = 1; i <= k; ++i) {
        cum += q[i - 1];
        v[i] = dist.quantile(std::min(cum, 1.0));
    }
    v[k + 1] = 1.0;
    // Quantile monotonicity holds mathematically; guard rounding anyway.
    for (int i = 1; i <= k; ++i) v[i] = std::max(v[i], v[i - 1]);
    return ThresholdStrategy(std::move(v));
}

BidProbs probs_of_strategy(const ThresholdStrategy& s, const ValueDistribution& dist) {
    const int k = s.num_positive_bids();
    std::vector<double> q(k + 1);
    // Mass of [0, v_1] includes any atom at 0, so F(v_1) - F(v_0) is replaced
    // by F(v_1) outright.
    double prev = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double cur = (j == k) ? 1.0 : dist.cdf(s.threshold(j + 1));
        q[j] = std::max(0.0, cur - prev);
        prev = cur;
    }
    return BidProbs(std::move(q));
}

double strategy_utility(const ThresholdStrategy& s, const ValueDistribution& dist,
                        const CompetingBidDist& d, const BidGrid& grid) {
    const int k = grid.num_positive_bids();
    check_dim(s.num_positive_bids(), k, "strategy_utility: s");
    check_dim(d.size(), grid.num_bids(), "strategy_utility: d");
    std::vector<double> f(k + 2);
    for (int i = 0; i <= k + 1; ++i) f[i] = dist.cdf(s.threshold(i));
    // u(s|F,d) = sum_i d_i ( int_{F(v_i)}^1 F^-(u) du + b_i F(v_i) - b_K
    //                        + eps * sum_{j=i+1}^K F(v_j) ).
    std::vector<double> tail(k + 2, 0.0);
    for (int j = k; j >= 1; --j) tail[j] = tail[j + 1] + f[j];
    double total = 0.0;
    for (int i = 0; i <= k; ++i) {
        if (d[i] == 0.0) continue;
        total += d[i] * (dist.quantile_integral(f[i], 1.0) + grid.bid(i) * f[i] - grid.bid(k) +
                         grid.spacing() * tail[i + 1]);
    }
    return total;
}

double strategy_revenue(const ThresholdStrategy& s, const ValueDistribution& dist,
                        const CompetingBidDist& d, const BidGrid& grid) {
    const int k = grid.num_positive_bids();
    check_dim(s.num_positive_bids(), k, "strategy_revenue: s");
    check_dim(d.size(), grid.num_bids(), "strategy_revenue: d");
    std::vector<double> f(k + 2);
    for (int i = 0; i <= k + 1; ++i) f[i] = dist.cdf(s.threshold(i));
    f[0] = 0.0;  // mass on [0, v_1], atom included, belongs to bid 0
    f[k + 1] = 1.0;
    double total = 0.0;
    double pay = 0.0;
    for (int i = k; i >= 0; --i) {
        pay += grid.bid(i) * (f[i + 1] - f[i]);
        total += d[i] * pay;
    }
    return total;
}

}  // namespace fpa
