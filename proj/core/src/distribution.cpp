#include "fpa/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fpa {
namespace detail {

namespace {

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

void check_interval(double a, double b, const char* what) {
    check_unit(a, what);
    check_unit(b, what);
    if (a > b) throw std::domain_error(std::string(what) + ": interval endpoints out of order");
}

}  // namespace

class DistModel {
public:
    virtual ~DistModel() = default;
    virtual DistKind kind() const = 0;
    virtual double cdf(double x) const = 0;
    virtual double quantile(double y) const = 0;
    virtual double quantile_integral(double a, double b) const = 0;
    virtual double atom_at_zero() const { return 0.0; }
    virtual bool absolutely_continuous() const { return true; }
    virtual bool piecewise_linear_cdf() const = 0;
    virtual std::vector<double> cdf_breakpoints() const = 0;
};

namespace {

// Exact maximum of r*(1-F(r)) when F is linear between breakpoints:
// candidates are the knots and the interior vertex of each quadratic piece.
double myerson_piecewise_linear(const DistModel& model, const std::vector<double>& knots) {
    double best = 0.0;
    auto consider = [&](double r) {
        if (r < 0.0 || r > 1.0) return;
        best = std::max(best, r * (1.0 - model.cdf(r)));
    };
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        consider(lo);
        consider(hi);
        const double flo = model.cdf(lo), fhi = model.cdf(hi);
        if (hi > lo && fhi > flo) {
            // On the piece F(r) = flo + m (r - lo): vertex of r (1 - F(r)).
            const double m = (fhi - flo) / (hi - lo);
            const double vertex = (1.0 - flo + m * lo) / (2.0 * m);
            if (vertex > lo && vertex < hi) consider(vertex);
        }
    }
    return best;
}

double myerson_grid_golden(const DistModel& model, int resolution) {
    auto objective = [&](double r) { return r * (1.0 - model.cdf(r)); };
    int best_i = 0;
    double best = 0.0;
    for (int i = 0; i <= resolution; ++i) {
        const double r = static_cast<double>(i) / resolution;
        const double v = objective(r);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    // Golden-section refinement on the bracket around the best grid point.
    double lo = std::max(0.0, (best_i - 1.0) / resolution);
    double hi = std::min(1.0, (best_i + 1.0) / resolution);
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        }
    }
    return std::max({best, f1, f2});
}

class UniformModel final : public DistModel {
public:
    DistKind kind() const override { return DistKind::analytic; }
    double cdf(double x) const override { return x; }
    double quantile(double y) const override { return y; }
    double quantile_integral(double a, double b) const override { return 0.5 * (b * b - a * a); }
    bool piecewise_linear_cdf() const override { return true; }
    std::vector<double> cdf_breakpoints() const override { return {0.0, 1.0}; }
};

// F(x) = 0 on [0,a]; 1 - a/x on (a, 3/4); linear from (3/4, 1-4a/3) to (1,1).
class EquiRevenueModel final : public DistModel {
public:
    explicit EquiRevenueModel(double a) : a_(a), fc_(1.0 - 4.0 * a / 3.0), slope_(16.0 * a / 3.0) {
        if (!(a > 0.0 && a < 0.75))
            throw std::invalid_argument("equi_revenue: start must lie in (0, 3/4)");
    }

    DistKind kind() const override { return DistKind::analytic; }

    double cdf(double x) const override {
        if (x <= a_) return 0.0;
        if (x < 0.75) return 1.0 - a_ / x;
        return std::min(1.0, fc_ + (x - 0.75) * slope_);
    }

    double quantile(double y) const override {
        if (y <= 0.0) return 0.0;
        if (y <= fc_) return a_ / (1.0 - y);
        return 0.75 + (y - fc_) / slope_;
    }

    double quantile_integral(double a, double b) const override {
        double total = 0.0;
        // Hyperbolic piece: integral of a_/(1-u).
        const double lo1 = std::min(a, fc_), hi1 = std::min(b, fc_);
        if (hi1 > lo1) total += a_ * std::log((1.0 - lo1) / (1.0 - hi1));
        // Linear piece: integral of 3/4 + (u - fc)/slope.
        const double lo2 = std::max(a, fc_), hi2 = std::max(b, fc_);
        if (hi2 > lo2) {
            const double mid = 0.5 * (lo2 + hi2);
            total += (hi2 - lo2) * (0.75 + (mid - fc_) / slope_);
        }
        return total;
    }

    bool piecewise_linear_cdf() const override { return false; }
    std::vector<double> cdf_breakpoints() const override { return {0.0, a_, 0.75, 1.0}; }

private:
    double a_;
    double fc_;
    double slope_;
};

class PiecewiseLinearModel final : public DistModel {
public:
    explicit PiecewiseLinearModel(std::vector<CdfPoint> pts) : pts_(std::move(pts)) {
        if (pts_.size() < 2) throw std::invalid_argument("plcdf: need at least two points");
        if (pts_.front().x != 0.0 || pts_.back().x != 1.0)
            throw std::invalid_argument("plcdf: support must span [0,1]");
        if (std::abs(pts_.front().y) > 1e-12)
            throw std::invalid_argument("plcdf: F(0) must equal 0");
        if (std::abs(pts_.back().y - 1.0) > 1e-12)
            throw std::invalid_argument("plcdf: F(1) must equal 1");
        pts_.front().y = 0.0;
        pts_.back().y = 1.0;
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            if (!(pts_[i].x > pts_[i - 1].x))
                throw std::invalid_argument("plcdf: x values must be strictly increasing");
            if (pts_[i].y < pts_[i - 1].y - 1e-12)
                throw std::invalid_argument("plcdf: CDF values must be non-decreasing");
            pts_[i].y = std::max(pts_[i].y, pts_[i - 1].y);
        }
    }

    DistKind kind() const override { return DistKind::piecewise_linear; }

    double cdf(double x) const override {
        auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                   [](double v, const CdfPoint& p) { return v < p.x; });
        if (it == pts_.begin()) return pts_.front().y;
        if (it == pts_.end()) return pts_.back().y;
        const CdfPoint& hi = *it;
        const CdfPoint& lo = *(it - 1);
        const double t = (x - lo.x) / (hi.x - lo.x);
        return lo.y + t * (hi.y - lo.y);
    }

    double quantile(double y) const override {
        if (y <= 0.0) return 0.0;
        // First knot with F >= y; infimum convention picks the left end of
        // any flat run.
        auto it = std::lower_bound(pts_.begin(), pts_.end(), y,
                                   [](const CdfPoint& p, double v) { return p.y < v; });
        if (it == pts_.end()) return 1.0;
        if (it == pts_.begin()) return pts_.front().x;
        const CdfPoint& hi = *it;
        const CdfPoint& lo = *(it - 1);
        if (hi.y == lo.y) return lo.x;
        const double t = (y - lo.y) / (hi.y - lo.y);
        return lo.x + t * (hi.x - lo.x);
    }

    double quantile_integral(double a, double b) const override {
        // F^- is piecewise linear in u over the rising segments; flats in F
        // are jumps of F^- with zero u-measure.
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
            const double ylo = pts_[i].y, yhi = pts_[i + 1].y;
            if (yhi <= ylo) continue;
            const double lo = std::max(a, ylo), hi = std::min(b, yhi);
            if (hi <= lo) continue;
            const double xlo = pts_[i].x, xhi = pts_[i + 1].x;
            auto inv = [&](double u) { return xlo + (u - ylo) / (yhi - ylo) * (xhi - xlo); };
            total += (hi - lo) * 0.5 * (inv(lo) + inv(hi));
        }
        return total;
    }

    bool piecewise_linear_cdf() const override { return true; }

    std::vector<double> cdf_breakpoints() const override {
        std::vector<double> xs;
        xs.reserve(pts_.size());
        for (const auto& p : pts_) xs.push_back(p.x);
        return xs;
    }

    const std::vector<CdfPoint>& points() const { return pts_; }

private:
    std::vector<CdfPoint> pts_;
};

// Interpolated empirical CDF backed directly by the sorted sample buffer;
// the uniform ordinate spacing (l - 1/2)/t makes quantile lookups O(1).
class InterpolatedEcdfModel final : public DistModel {
public:
    explicit InterpolatedEcdfModel(std::shared_ptr<const std::vector<double>> samples,
                                   bool validate)
        : samples_(std::move(samples)), t_(samples_ ? samples_->size() : 0) {
        if (t_ == 0) throw std::invalid_argument("interpolated_ecdf: empty sample set");
        if (!validate) return;
        const auto& v = *samples_;
        for (std::size_t i = 0; i < t_; ++i) {
            if (!(v[i] > 0.0 && v[i] < 1.0))
                throw std::invalid_argument("interpolated_ecdf: samples must lie in (0,1)");
            if (i > 0 && !(v[i] > v[i - 1]))
                throw std::invalid_argument("interpolated_ecdf: samples must be sorted and distinct");
        }
    }

    DistKind kind() const override { return DistKind::piecewise_linear; }

    double cdf(double x) const override {
        const auto& v = *samples_;
        const auto n = static_cast<std::ptrdiff_t>(t_);
        const std::ptrdiff_t l = std::upper_bound(v.begin(), v.end(), x) - v.begin();
        // x lies between knot l and knot l+1 (knot 0 = (0,0), knot t+1 = (1,1)).
        const double xlo = (l == 0) ? 0.0 : v[l - 1];
        const double xhi = (l == n) ? 1.0 : v[l];
        const double ylo = knot_y(l);
        const double yhi = knot_y(l + 1);
        if (xhi == xlo) return ylo;
        return ylo + (x - xlo) / (xhi - xlo) * (yhi - ylo);
    }

    double quantile(double y) const override {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        const auto n = static_cast<std::ptrdiff_t>(t_);
        // Ordinates are uniform: y in [(l-1/2)/t, (l+1/2)/t) maps to segment l.
        auto l = static_cast<std::ptrdiff_t>(std::floor(y * t_ + 0.5));
        l = std::clamp<std::ptrdiff_t>(l, 0, n);
        // floor can land one segment off at the boundaries; fix up.
        while (l > 0 && y < knot_y(l)) --l;
        while (l < n && y > knot_y(l + 1)) ++l;
        const double ylo = knot_y(l), yhi = knot_y(l + 1);
        const double xlo = knot_x(l), xhi = knot_x(l + 1);
        return xlo + (y - ylo) / (yhi - ylo) * (xhi - xlo);
    }

    double quantile_integral(double a, double b) const override {
        const auto n = static_cast<std::ptrdiff_t>(t_);
        auto first = static_cast<std::ptrdiff_t>(std::floor(a * t_ + 0.5));
        first = std::clamp<std::ptrdiff_t>(first, 0, n);
        while (first > 0 && a < knot_y(first)) --first;
        double total = 0.0;
        for (std::ptrdiff_t l = first; l <= n; ++l) {
            const double ylo = knot_y(l), yhi = knot_y(l + 1);
            const double lo = std::max(a, ylo), hi = std::min(b, yhi);
            if (hi <= lo) {
                if (ylo >= b) break;
                continue;
            }
            const double xlo = knot_x(l), xhi = knot_x(l + 1);
            auto inv = [&](double u) { return xlo + (u - ylo) / (yhi - ylo) * (xhi - xlo); };
            total += (hi - lo) * 0.5 * (inv(lo) + inv(hi));
        }
        return total;
    }

    bool piecewise_linear_cdf() const override { return true; }

    std::vector<double> cdf_breakpoints() const override {
        std::vector<double> xs;
        xs.reserve(t_ + 2);
        xs.push_back(0.0);
        xs.insert(xs.end(), samples_->begin(), samples_->end());
        xs.push_back(1.0);
        return xs;
    }

    std::vector<CdfPoint> knots() const {
        std::vector<CdfPoint> pts;
        pts.reserve(t_ + 2);
        for (std::ptrdiff_t l = 0; l <= static_cast<std::ptrdiff_t>(t_) + 1; ++l)
            pts.push_back({knot_x(l), knot_y(l)});
        return pts;
    }

private:
    double knot_x(std::ptrdiff_t l) const {
        if (l <= 0) return 0.0;
        if (l > static_cast<std::ptrdiff_t>(t_)) return 1.0;
        return (*samples_)[l - 1];
    }
    double knot_y(std::ptrdiff_t l) const {
        if (l <= 0) return 0.0;
        if (l > static_cast<std::ptrdiff_t>(t_)) return 1.0;
        return (l - 0.5) / static_cast<double>(t_);
    }

    std::shared_ptr<const std::vector<double>> samples_;
    std::size_t t_;
};

class DominatedModel final : public DistModel {
public:
    DominatedModel(ValueDistribution base, double alpha)
        : base_(std::move(base)), alpha_(std::min(alpha, 1.0)) {
        if (!(alpha > 0.0)) throw std::invalid_argument("dominated: alpha must be positive");
        if (base_.atom_at_zero() != 0.0 || !base_.absolutely_continuous())
            throw std::invalid_argument("dominated: base must be a continuous CDF with F(0)=0");
    }

    DistKind kind() const override { return DistKind::dominated_empirical; }
    double cdf(double x) const override { return std::min(1.0, base_.cdf(x) + alpha_); }

    double quantile(double y) const override {
        if (y <= alpha_) return 0.0;
        return base_.quantile(std::min(1.0, y - alpha_));
    }

    double quantile_integral(double a, double b) const override {
        return base_.quantile_integral(std::max(0.0, a - alpha_), std::max(0.0, b - alpha_));
    }

    double atom_at_zero() const override { return alpha_; }
    bool absolutely_continuous() const override { return false; }
    bool piecewise_linear_cdf() const override { return base_.piecewise_linear_cdf(); }

    std::vector<double> cdf_breakpoints() const override {
        std::vector<double> xs = base_.cdf_breakpoints();
        xs.push_back(base_.quantile(1.0 - alpha_));  // where the cap at 1 starts
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return xs;
    }

    const ValueDistribution& base() const { return base_; }
    double alpha() const { return alpha_; }

private:
    ValueDistribution base_;
    double alpha_;
};

}  // namespace
}  // namespace detail

ValueDistribution::ValueDistribution(std::shared_ptr<const detail::DistModel> impl)
    : impl_(std::move(impl)) {}

DistKind ValueDistribution::kind() const { return impl_->kind(); }

double ValueDistribution::cdf(double x) const {
    detail::check_unit(x, "cdf: x");
    return impl_->cdf(x);
}

double ValueDistribution::quantile(double y) const {
    detail::check_unit(y, "quantile: y");
    return impl_->quantile(y);
}

double ValueDistribution::quantile_integral(double a, double b) const {
    detail::check_interval(a, b, "quantile_integral");
    if (a == b) return 0.0;
    return impl_->quantile_integral(a, b);
}

double ValueDistribution::partial_mean(double a, double b) const {
    detail::check_interval(a, b, "partial_mean");
    // E[v 1(a < v <= b)] = integral of F^- over [F(a), F(b)]; the only
    // possible atom sits at v = 0 and contributes nothing.
    return quantile_integral(impl_->cdf(a), impl_->cdf(b));
}

double ValueDistribution::sample(CounterRng& rng) const { return impl_->quantile(rng.uniform01()); }

double ValueDistribution::atom_at_zero() const { return impl_->atom_at_zero(); }
bool ValueDistribution::absolutely_continuous() const { return impl_->absolutely_continuous(); }
bool ValueDistribution::piecewise_linear_cdf() const { return impl_->piecewise_linear_cdf(); }
std::vector<double> ValueDistribution::cdf_breakpoints() const { return impl_->cdf_breakpoints(); }

double ValueDistribution::myerson_revenue(int resolution) const {
    if (resolution < 2) throw std::invalid_argument("myerson_revenue: resolution must be >= 2");
    if (impl_->piecewise_linear_cdf())
        return detail::myerson_piecewise_linear(*impl_, impl_->cdf_breakpoints());
    return detail::myerson_grid_golden(*impl_, resolution);
}

ValueDistribution ValueDistribution::uniform() {
    return ValueDistribution(std::make_shared<detail::UniformModel>());
}

ValueDistribution ValueDistribution::equi_revenue(double a) {
    return ValueDistribution(std::make_shared<detail::EquiRevenueModel>(a));
}

ValueDistribution ValueDistribution::example1() { return equi_revenue(0.125); }

ValueDistribution ValueDistribution::piecewise_linear(std::vector<CdfPoint> points) {
    return ValueDistribution(std::make_shared<detail::PiecewiseLinearModel>(std::move(points)));
}

ValueDistribution ValueDistribution::interpolated_ecdf(
    std::shared_ptr<const std::vector<double>> sorted_samples, bool validate) {
    return ValueDistribution(
        std::make_shared<detail::InterpolatedEcdfModel>(std::move(sorted_samples), validate));
}

ValueDistribution ValueDistribution::dominated(ValueDistribution base, double alpha) {
    auto model = std::make_shared<detail::DominatedModel>(std::move(base), alpha);
    ValueDistribution d{model};
    d.base_ = std::make_shared<const ValueDistribution>(model->base());
    return d;
}

const ValueDistribution& ValueDistribution::dominated_base() const {
    if (!base_) throw std::logic_error("dominated_base: not a dominated-empirical distribution");
    return *base_;
}

void ValueDistribution::write_plcdf(std::ostream& out) const {
    std::vector<CdfPoint> pts;
    if (auto* pl = dynamic_cast<const detail::PiecewiseLinearModel*>(impl_.get())) {
        pts = pl->points();
    } else if (auto* ecdf = dynamic_cast<const detail::InterpolatedEcdfModel*>(impl_.get())) {
        pts = ecdf->knots();
    } else {
        throw std::logic_error("write_plcdf: only piecewise-linear CDFs serialize to plcdf");
    }
    out << "plcdf v1\n";
    out.precision(17);
    for (const auto& p : pts) out << p.x << '\t' << p.y << '\n';
}

ValueDistribution ValueDistribution::read_plcdf(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "plcdf v1") throw std::invalid_argument("read_plcdf: bad header: " + header);
    std::vector<CdfPoint> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        CdfPoint p{};
        if (!(ls >> p.x >> p.y)) throw std::invalid_argument("read_plcdf: bad line: " + line);
        pts.push_back(p);
    }
    return piecewise_linear(std::move(pts));
}

CdfDiffExtrema cdf_difference_extrema(const ValueDistribution& a, const ValueDistribution& b) {
    std::vector<double> xs = a.cdf_breakpoints();
    {
        auto bb = b.cdf_breakpoints();
        xs.insert(xs.end(), bb.begin(), bb.end());
    }
    if (!(a.piecewise_linear_cdf() && b.piecewise_linear_cdf())) {
        constexpr int kGrid = 10000;
        xs.reserve(xs.size() + kGrid + 1);
        for (int i = 0; i <= kGrid; ++i) xs.push_back(static_cast<double>(i) / kGrid);
    }
    xs.push_back(0.0);
    xs.push_back(1.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    CdfDiffExtrema e{0.0, 0.0};
    bool first = true;
    for (double x : xs) {
        if (x < 0.0 || x > 1.0) continue;
        const double d = b.cdf(x) - a.cdf(x);
        if (first) {
            e.min_diff = e.max_diff = d;
            first = false;
        } else {
            e.min_diff = std::min(e.min_diff, d);
            e.max_diff = std::max(e.max_diff, d);
        }
    }
    return e;
}

double sup_distance(const ValueDistribution& a, const ValueDistribution& b) {
    const CdfDiffExtrema e = cdf_difference_extrema(a, b);
    return std::max(std::abs(e.min_diff), std::abs(e.max_diff));
}

}  // namespace fpa
