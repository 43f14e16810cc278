#include "fpa/olo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fpa {

std::vector<double> project_simplex(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    int rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cum += u[i];
        const double cand = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - cand > 0.0) {
            rho = static_cast<int>(i + 1);
            theta = cand;
        }
    }
    (void)rho;
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(0.0, x - theta);
        sum += x;
    }
    for (double& x : v) x /= sum;  // kill residual rounding in the sum
    return v;
}

std::vector<double> project_polytope(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("project_polytope: empty vector");
    // PAV for the non-increasing order, then clamp to [0,1]; clamping a
    // monotone vector keeps it monotone, so this is the exact projection.
    const std::size_t n = v.size();
    std::vector<double> level(n);
    std::vector<int> count(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        level[m] = v[i];
        count[m] = 1;
        while (m > 0 && level[m - 1] < level[m]) {
            level[m - 1] = (level[m - 1] * count[m - 1] + level[m] * count[m]) /
                           (count[m - 1] + count[m]);
            count[m - 1] += count[m];
            --m;
        }
        ++m;
    }
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t b = 0; b < m; ++b) {
        const double x = std::clamp(level[b], 0.0, 1.0);
        out.insert(out.end(), count[b], x);
    }
    return out;
}

Learner::Learner(LearnerKind kind, const BidGrid& grid, double fixed_eta)
    : kind_(kind), fixed_eta_(fixed_eta) {
    const int n = grid.num_bids();
    switch (kind_) {
        case LearnerKind::mwu:
        case LearnerKind::ftrl_entropy:
            x_.assign(n, 1.0 / n);
            acc_.assign(n, 0.0);
            break;
        case LearnerKind::oga_simplex:
            x_.assign(n, 1.0 / n);
            break;
        case LearnerKind::oga_polytope:
            x_.assign(grid.num_positive_bids(), 0.0);
            break;
    }
}

BidProbs Learner::next_probs() const {
    if (polytope_domain()) throw std::logic_error("next_probs: polytope-domain learner");
    return BidProbs(x_);
}

BidQuantiles Learner::next_quantiles() const {
    if (!polytope_domain()) throw std::logic_error("next_quantiles: simplex-domain learner");
    return BidQuantiles(x_);
}

double Learner::eta(int t) const {
    if (fixed_eta_ > 0.0) return fixed_eta_;
    const auto n = static_cast<double>(x_.size());
    switch (kind_) {
        case LearnerKind::mwu:
        case LearnerKind::ftrl_entropy:
            return std::sqrt(std::log(n) / t);
        case LearnerKind::oga_simplex:
            return std::sqrt(2.0 / t);
        case LearnerKind::oga_polytope:
            return 1.0 / std::sqrt(static_cast<double>(t));
    }
    return 0.0;
}

void Learner::update(const std::vector<double>& g) {
    if (g.size() != x_.size()) throw std::invalid_argument("learner_update: dimension mismatch");
    for (double gi : g)
        if (!(std::abs(gi) <= 1.0 + 1e-9))
            throw std::invalid_argument("learner_update: gradient exceeds the unit sup-norm bound");
    const double step = eta(++t_);
    switch (kind_) {
        case LearnerKind::mwu: {
            // x_{t+1,i} is proportional to x_{t,i} exp(step g_i); kept as
            // log-weights with max-subtraction so long horizons cannot
            // overflow.
            for (std::size_t i = 0; i < x_.size(); ++i) acc_[i] += step * g[i];
            break;
        }
        case LearnerKind::ftrl_entropy: {
            for (std::size_t i = 0; i < x_.size(); ++i) acc_[i] += g[i];
            break;
        }
        case LearnerKind::oga_simplex:
        case LearnerKind::oga_polytope: {
            std::vector<double> y(x_.size());
            for (std::size_t i = 0; i < x_.size(); ++i) y[i] = x_[i] + step * g[i];
            x_ = polytope_domain() ? project_polytope(std::move(y))
                                   : project_simplex(std::move(y));
            return;
        }
    }
    // Softmax of acc (MWU) or step * acc (FTRL).
    const double scale = (kind_ == LearnerKind::ftrl_entropy) ? step : 1.0;
    double hi = -1e300;
    for (double a : acc_) hi = std::max(hi, scale * a);
    double sum = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        x_[i] = std::exp(scale * acc_[i] - hi);
        sum += x_[i];
    }
    for (double& xi : x_) xi /= sum;
}

}  // namespace fpa
