#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "fpa/distribution.hpp"

namespace fpa {

// Confidence radius sqrt(ln(2/delta)/(2t)) + 1/(2t).
double alpha(int t, double delta);

// Sorted log of observed values in (0,1). Boundary samples are clamped to
// [2^-40, 1 - 2^-40] and exact duplicates nudged to the next representable
// double; both are counted, not rejected, since the model makes them
// probability-zero but floating point does not.
class SampleLog {
public:
    SampleLog();

    void insert(double v);
    int size() const noexcept { return static_cast<int>(samples_->size()); }
    double operator[](int i) const { return (*samples_)[i]; }
    const std::vector<double>& sorted() const noexcept { return *samples_; }
    int adjustment_count() const noexcept { return adjustments_; }

    // Shared view of the sorted buffer for zero-copy CDF construction.
    // Any distribution built over it is invalidated by the next insert.
    std::shared_ptr<const std::vector<double>> shared_view() const noexcept { return samples_; }

private:
    std::shared_ptr<std::vector<double>> samples_;
    int adjustments_ = 0;
};

// Piecewise-linear CDF through (0,0), (V_(l), (l-1/2)/t), (1,1).
ValueDistribution interpolated_cdf(const SampleLog& samples);

struct DominatedEmpirical {
    ValueDistribution tilde;  // interpolated empirical CDF
    ValueDistribution hat;    // min{1, tilde + alpha}, atom alpha at 0
    double alpha;
};

// min{1, interpolated + alpha(t, delta)}: shifts alpha mass to zero so the
// true distribution stochastically dominates the estimate w.p. >= 1 - delta.
DominatedEmpirical dominated_cdf(const SampleLog& samples, double delta);

// True iff sup_x |F(x) - F_t(x)| <= sqrt(ln(2/delta)/(2t)) for the step
// empirical CDF F_t of the samples.
bool dkw_check(const ValueDistribution& true_dist, const SampleLog& samples, double delta);

// `atom0 <alpha>` line followed by the plcdf serialization of the base CDF.
void write_dominated(std::ostream& out, const DominatedEmpirical& d);
DominatedEmpirical read_dominated(std::istream& in);

}  // namespace fpa
