#pragma once

#include <vector>

#include "fpa/formulation.hpp"

namespace fpa {

enum class LearnerKind { mwu, oga_simplex, oga_polytope, ftrl_entropy };

// Euclidean projection onto the probability simplex (sort-and-threshold).
std::vector<double> project_simplex(std::vector<double> v);

// Euclidean projection onto {1 >= p_1 >= ... >= p_K >= 0}: pool-adjacent-
// violators isotonic fit followed by clamping to [0,1].
std::vector<double> project_polytope(std::vector<double> v);

// Maximizing OLO learner. Simplex learners iterate over Q = Delta^{K+1} and
// consume q-space gradients; the polytope learner iterates over P and
// consumes p-space gradients. Anytime step sizes: sqrt(ln(K+1)/t) for
// MWU/FTRL-entropy, sqrt(2/t) for OGA on the simplex, 1/sqrt(t) for OGA on
// the polytope; a positive fixed_eta overrides the schedule.
class Learner {
public:
    Learner(LearnerKind kind, const BidGrid& grid, double fixed_eta = 0.0);

    LearnerKind kind() const noexcept { return kind_; }
    bool polytope_domain() const noexcept { return kind_ == LearnerKind::oga_polytope; }
    int dim() const noexcept { return static_cast<int>(x_.size()); }
    int round() const noexcept { return t_; }

    // Current iterate, without mutating state.
    const std::vector<double>& next() const noexcept { return x_; }
    BidProbs next_probs() const;          // simplex learners only
    BidQuantiles next_quantiles() const;  // polytope learner only

    // One ascent step on the linear payoff <g, x>. Increments the round
    // counter; the step size for the t-th call uses t.
    void update(const std::vector<double>& g);

private:
    double eta(int t) const;

    LearnerKind kind_;
    double fixed_eta_;
    std::vector<double> x_;
    std::vector<double> acc_;  // log-weights (MWU) or gradient sum (FTRL)
    int t_ = 0;
};

}  // namespace fpa
