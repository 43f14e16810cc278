#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "fpa/rng.hpp"

namespace fpa {

enum class DistKind { analytic, piecewise_linear, dominated_empirical };

namespace detail {
class DistModel;
}

struct CdfPoint {
    double x;
    double y;
};

// Value distribution on [0, 1], immutable after construction. All query
// arguments outside [0, 1] are domain errors; nothing is clamped silently.
class ValueDistribution {
public:
    DistKind kind() const;

    double cdf(double x) const;
    // Generalized inverse F^-(y) = inf{v : F(v) >= y}.
    double quantile(double y) const;
    // Exact integral of the quantile function over [a, b].
    double quantile_integral(double a, double b) const;
    // E[v * 1(a < v <= b)].
    double partial_mean(double a, double b) const;
    double mean() const { return quantile_integral(0.0, 1.0); }
    // Inverse-transform sample.
    double sample(CounterRng& rng) const;

    // Mass at v = 0; nonzero only for the dominated-empirical kind.
    double atom_at_zero() const;
    bool absolutely_continuous() const;
    // True when the CDF is exactly piecewise linear between breakpoints().
    bool piecewise_linear_cdf() const;
    std::vector<double> cdf_breakpoints() const;

    // max_r r * (1 - F(r)). Exact for piecewise-linear CDFs; grid search
    // refined by golden section at `resolution` points otherwise.
    double myerson_revenue(int resolution = 100000) const;

    static ValueDistribution uniform();
    // Equi-revenue CDF 1 - a/x on (a, 3/4), linearly completed to (1, 1).
    static ValueDistribution equi_revenue(double a);
    // equi_revenue(1/8): the negative-regret counterexample distribution.
    static ValueDistribution example1();
    static ValueDistribution piecewise_linear(std::vector<CdfPoint> points);
    // Interpolated empirical CDF through (0,0), (V_(l), (l-1/2)/t), (1,1).
    // The sample buffer is shared, not copied; it must stay sorted and
    // unchanged while this distribution is alive.
    static ValueDistribution interpolated_ecdf(std::shared_ptr<const std::vector<double>> sorted_samples,
                                               bool validate = true);
    // min{1, base(x) + alpha}: shifts alpha mass to zero so the true
    // distribution stochastically dominates the estimate. alpha > 1 is
    // capped at 1 (everything collapses to the atom), mirroring the min.
    static ValueDistribution dominated(ValueDistribution base, double alpha);

    // Text serialization: header "plcdf v1", then "x<TAB>F(x)" lines.
    void write_plcdf(std::ostream& out) const;
    static ValueDistribution read_plcdf(std::istream& in);

    // For the dominated-empirical kind: the continuous base CDF.
    const ValueDistribution& dominated_base() const;

private:
    explicit ValueDistribution(std::shared_ptr<const detail::DistModel> impl);
    std::shared_ptr<const detail::DistModel> impl_;
    std::shared_ptr<const ValueDistribution> base_;  // dominated kind only
};

struct CdfDiffExtrema {
    double min_diff;  // min over x of F_b(x) - F_a(x)
    double max_diff;  // max over x of F_b(x) - F_a(x)
};

// Extrema of F_b - F_a. Exact at breakpoint unions when both CDFs are
// piecewise linear, otherwise evaluated on >= 10^4 grid points plus all
// breakpoints.
CdfDiffExtrema cdf_difference_extrema(const ValueDistribution& a, const ValueDistribution& b);

// max_x |F_a(x) - F_b(x)|.
double sup_distance(const ValueDistribution& a, const ValueDistribution& b);

}  // namespace fpa
