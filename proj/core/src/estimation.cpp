#include "fpa/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fpa {
namespace {

constexpr double kBoundaryMargin = 0x1.0p-40;

}  // namespace

double alpha(int t, double delta) {
    if (t < 1) throw std::domain_error("alpha: t must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("alpha: delta must lie in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * t)) + 0.5 / t;
}

SampleLog::SampleLog() : samples_(std::make_shared<std::vector<double>>()) {}

void SampleLog::insert(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("SampleLog: value outside [0,1]");
    double x = v;
    if (x < kBoundaryMargin || x > 1.0 - kBoundaryMargin) {
        x = std::clamp(x, kBoundaryMargin, 1.0 - kBoundaryMargin);
        ++adjustments_;
    }
    auto& s = *samples_;
    auto it = std::lower_bound(s.begin(), s.end(), x);
    if (it != s.end() && *it == x) {
        // Nudge the newcomer up to the first free double below the next
        // sample.
        ++adjustments_;
        while (it != s.end() && *it == x) {
            x = std::nextafter(x, 2.0);
            if (x >= 1.0 - kBoundaryMargin)
                throw std::overflow_error("SampleLog: no room to separate duplicate sample");
            ++it;
        }
        it = std::lower_bound(s.begin(), s.end(), x);
    }
    s.insert(it, x);
}

ValueDistribution interpolated_cdf(const SampleLog& samples) {
    if (samples.size() == 0) throw std::invalid_argument("interpolated_cdf: empty sample set");
    return ValueDistribution::interpolated_ecdf(samples.shared_view(), /*validate=*/false);
}

DominatedEmpirical dominated_cdf(const SampleLog& samples, double delta) {
    ValueDistribution tilde = interpolated_cdf(samples);
    const double a = alpha(samples.size(), delta);
    ValueDistribution hat = ValueDistribution::dominated(tilde, a);
    return {std::move(tilde), std::move(hat), a};
}

bool dkw_check(const ValueDistribution& true_dist, const SampleLog& samples, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("dkw_check: delta must lie in (0,1)");
    const int t = samples.size();
    if (t == 0) throw std::invalid_argument("dkw_check: empty sample set");
    // The step ECDF is constant between order statistics, so the sup is
    // attained at a jump (from one side or the other) or at x = 0.
    double sup = true_dist.cdf(0.0);
    for (int l = 1; l <= t; ++l) {
        const double f = true_dist.cdf(samples[l - 1]);
        sup = std::max({sup, std::abs(f - static_cast<double>(l) / t),
                        std::abs(f - static_cast<double>(l - 1) / t)});
    }
    return sup <= std::sqrt(std::log(2.0 / delta) / (2.0 * t));
}

void write_dominated(std::ostream& out, const DominatedEmpirical& d) {
    out.precision(17);
    out << "atom0 " << d.alpha << '\n';
    d.tilde.write_plcdf(out);
}

DominatedEmpirical read_dominated(std::istream& in) {
    std::string line;
    std::getline(in, line);
    std::istringstream ls(line);
    std::string tag;
    double a = 0.0;
    if (!(ls >> tag >> a) || tag != "atom0")
        throw std::invalid_argument("read_dominated: expected 'atom0 <alpha>' line");
    ValueDistribution tilde = ValueDistribution::read_plcdf(in);
    ValueDistribution hat = ValueDistribution::dominated(tilde, a);
    return {std::move(tilde), std::move(hat), a};
}

}  // namespace fpa
