#include "fpa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fpa/rng.hpp"

namespace fpa {
namespace {

double dot(const std::vector<double>& a, const BidProbs& q) {
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i) s += a[i] * q[i];
    return s;
}

}  // namespace

EpisodeTrace run_episode(const EpisodeConfig& config, Bidder bidder, Seller seller) {
    if (config.T < 0) throw std::invalid_argument("run_episode: negative horizon");
    EpisodeTrace tr{config.grid, config.dist};
    tr.seed = config.seed;
    tr.delta = config.delta;
    tr.known_dist = bidder.kind() == BidderKind::known_dist;
    tr.rounds.reserve(config.T);
    tr.h_counts.assign(config.grid.num_bids(), 0);
    tr.grad_sum.assign(config.grid.num_bids(), 0.0);

    CounterRng rng(config.seed);
    for (long t = 1; t <= config.T; ++t) {
        // The seller commits before the value is revealed; the peeked q is
        // the bidder's pre-round learner state, which cannot depend on V_t.
        std::optional<BidProbs> peek;
        const BidProbs* peek_ptr = nullptr;
        if (seller.kind() == SellerKind::adaptive_greedy) {
            peek = bidder.peek_probs();
            if (peek) peek_ptr = &*peek;
        }
        const int h = seller.choose(t, peek_ptr);

        const double v = config.dist.sample(rng);
        RoundDecision dec = bidder.begin_round(v);
        const double bid = config.grid.bid(dec.bid_index);
        const bool win = dec.bid_index >= h;

        RoundRecord r{};
        r.value = v;
        r.bid_index = dec.bid_index;
        r.h_index = h;
        r.realized_utility = win ? v - bid : 0.0;
        r.realized_payment = win ? bid : 0.0;

        const CompetingBidDist d = CompetingBidDist::point_mass(h, config.grid.num_bids());
        if (tr.known_dist) {
            r.exp_utility = utility_q(dec.q, config.dist, d, config.grid);
            r.exp_revenue = revenue_q(dec.q, d, config.grid);
        } else {
            r.exp_utility = strategy_utility(dec.strategy, config.dist, d, config.grid);
            r.exp_revenue = strategy_revenue(dec.strategy, config.dist, d, config.grid);
        }

        const std::vector<double> g = bidder.finish_round(h);
        seller.observe_bid(dec.bid_index);

        r.lgrad_dot_q = dot(g, dec.q);
        if (dec.q_prime) {
            double l1 = 0.0;
            for (int i = 0; i < dec.q.size(); ++i) l1 += std::abs(dec.q[i] - (*dec.q_prime)[i]);
            r.q_qprime_l1 = l1;
            r.alpha = dec.alpha;
        }

        ++tr.h_counts[h];
        for (int i = 0; i < config.grid.num_bids(); ++i) tr.grad_sum[i] += g[i];
        tr.sum_grad_dot_q += r.lgrad_dot_q;
        tr.total_exp_utility += r.exp_utility;
        tr.total_exp_revenue += r.exp_revenue;
        tr.rounds.push_back(r);
    }
    return tr;
}

BenchmarkResult hindsight_benchmark(const ValueDistribution& dist,
                                    const std::vector<long>& h_counts, const BidGrid& grid) {
    if (static_cast<int>(h_counts.size()) != grid.num_bids())
        throw std::invalid_argument("hindsight_benchmark: count vector size mismatch");
    long total = 0;
    for (long c : h_counts) {
        if (c < 0) throw std::invalid_argument("hindsight_benchmark: negative count");
        total += c;
    }
    const int k = grid.num_positive_bids();
    if (total == 0) return {0.0, ThresholdStrategy::constant(0, k)};

    // G_i = P(win with bid b_i); the best fixed strategy is the pointwise
    // argmax of the lines G_i (v - b_i), i.e. their upper envelope.
    std::vector<double> win(k + 1);
    double cum = 0.0;
    for (int i = 0; i <= k; ++i) {
        cum += static_cast<double>(h_counts[i]) / static_cast<double>(total);
        win[i] = cum;
    }

    std::vector<int> line;    // envelope stack, ascending slope
    std::vector<double> start;  // where each stacked line takes over
    for (int i = 0; i <= k; ++i) {
        if (!line.empty() && win[i] == win[line.back()]) continue;  // same slope, higher bid loses
        double x = 0.0;
        while (!line.empty()) {
            const int j = line.back();
            x = (win[i] * grid.bid(i) - win[j] * grid.bid(j)) / (win[i] - win[j]);
            if (x <= start.back()) {
                line.pop_back();
                start.pop_back();
            } else {
                break;
            }
        }
        if (line.empty()) x = 0.0;
        line.push_back(i);
        start.push_back(x);
    }

    double per_round = 0.0;
    std::vector<double> thresholds(k + 2, 1.0);
    thresholds[0] = 0.0;
    for (std::size_t s = 0; s < line.size(); ++s) {
        const double xs = start[s];
        const double xe = (s + 1 < line.size()) ? std::min(start[s + 1], 1.0) : 1.0;
        if (xs >= 1.0 || xe <= xs) continue;
        const int i = line[s];
        per_round += win[i] * (dist.partial_mean(xs, xe) - grid.bid(i) * (dist.cdf(xe) - dist.cdf(xs)));
        for (int b = 1; b <= i && b <= k; ++b) thresholds[b] = std::min(thresholds[b], xs);
    }
    // thresholds[b] above was set to the start of the first segment bidding
    // at least b; segments come in increasing bid order so min() suffices.
    for (int b = 1; b <= k; ++b) thresholds[b] = std::max(thresholds[b], thresholds[b - 1]);

    return {per_round * static_cast<double>(total), ThresholdStrategy(std::move(thresholds))};
}

LinearizedRegret linearized_regret(const EpisodeTrace& trace) {
    if (trace.grad_sum.empty()) return {0.0, 0.0};
    const double best = *std::max_element(trace.grad_sum.begin(), trace.grad_sum.end());
    return {best - trace.sum_grad_dot_q, trace.grad_sum[0] - trace.sum_grad_dot_q};
}

double robustness_gap(const EpisodeTrace& trace, double myerson) {
    return trace.total_exp_revenue - myerson * static_cast<double>(trace.num_rounds());
}

double theorem2_audit(const EpisodeTrace& trace, double myerson) {
    double worst = -1e300;
    for (const RoundRecord& r : trace.rounds)
        worst = std::max(worst, r.exp_revenue + r.lgrad_dot_q - myerson);
    return trace.rounds.empty() ? 0.0 : worst;
}

double lemma6_max_violation(const EpisodeTrace& trace) {
    double worst = -1e300;
    for (const RoundRecord& r : trace.rounds)
        worst = std::max(worst, r.q_qprime_l1 - 2.0 * r.alpha);
    return trace.rounds.empty() ? 0.0 : worst;
}

MetricsReport compute_metrics(const EpisodeTrace& trace, double myerson) {
    if (myerson < 0.0) myerson = trace.dist.myerson_revenue();
    const BenchmarkResult bench = hindsight_benchmark(trace.dist, trace.h_counts, trace.grid);
    const LinearizedRegret lr = linearized_regret(trace);
    MetricsReport m{};
    m.total_exp_utility = trace.total_exp_utility;
    m.total_exp_revenue = trace.total_exp_revenue;
    m.benchmark = bench.value;
    m.regret_ledger = bench.value - trace.total_exp_utility;
    m.lregret = lr.lregret;
    m.lregret_vs_q0 = lr.lregret_vs_q0;
    m.myer = myerson;
    m.rev_gap = robustness_gap(trace, myerson);
    m.theorem2_max_violation = theorem2_audit(trace, myerson);
    m.lemma6_max_violation = lemma6_max_violation(trace);
    return m;
}

void write_rounds_csv(std::ostream& out, const EpisodeTrace& trace, double myerson) {
    if (myerson < 0.0) myerson = trace.dist.myerson_revenue();
    out << "t,value,bid_index,h_index,exp_utility,exp_revenue,realized_utility,"
           "realized_payment,lgrad_dot_q,cum_regret_ledger,cum_rev_gap\n";
    out.precision(17);
    std::vector<long> prefix_counts(trace.h_counts.size(), 0);
    double cum_u = 0.0, cum_r = 0.0;
    long t = 0;
    for (const RoundRecord& r : trace.rounds) {
        ++t;
        ++prefix_counts[r.h_index];
        cum_u += r.exp_utility;
        cum_r += r.exp_revenue;
        const double bench = hindsight_benchmark(trace.dist, prefix_counts, trace.grid).value;
        out << t << ',' << r.value << ',' << r.bid_index << ',' << r.h_index << ','
            << r.exp_utility << ',' << r.exp_revenue << ',' << r.realized_utility << ','
            << r.realized_payment << ',' << r.lgrad_dot_q << ',' << bench - cum_u << ','
            << cum_r - myerson * static_cast<double>(t) << '\n';
    }
}

}  // namespace fpa
