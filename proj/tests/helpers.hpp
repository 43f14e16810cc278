#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fpa/distribution.hpp"
#include "fpa/formulation.hpp"
#include "fpa/rng.hpp"

namespace testutil {

// Adaptive Simpson quadrature, used as an independent oracle against the
// library's closed-form integrals.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, fb, frm, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(b), f(m), eps, 40);
}

inline fpa::BidProbs random_probs(fpa::CounterRng& rng, int n) {
    std::vector<double> q(n);
    double sum = 0.0;
    for (double& x : q) {
        x = -std::log(1.0 - rng.uniform01());
        sum += x;
    }
    for (double& x : q) x /= sum;
    return fpa::BidProbs(std::move(q));
}

inline fpa::BidQuantiles random_quantiles(fpa::CounterRng& rng, int k) {
    std::vector<double> p(k);
    for (double& x : p) x = rng.uniform01();
    std::sort(p.begin(), p.end(), std::greater<>());
    return fpa::BidQuantiles(std::move(p));
}

// Strictly increasing piecewise-linear CDF with `pieces` random interior
// knots.
inline fpa::ValueDistribution random_piecewise_linear(fpa::CounterRng& rng, int pieces = 6) {
    std::vector<double> xs(pieces), ys(pieces);
    for (int i = 0; i < pieces; ++i) {
        xs[i] = 0.02 + 0.96 * rng.uniform01();
        ys[i] = 0.02 + 0.96 * rng.uniform01();
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<fpa::CdfPoint> pts;
    pts.push_back({0.0, 0.0});
    for (int i = 0; i < pieces; ++i) {
        if (!pts.empty() && xs[i] - pts.back().x < 1e-6) continue;
        pts.push_back({xs[i], ys[i]});
    }
    pts.push_back({1.0, 1.0});
    return fpa::ValueDistribution::piecewise_linear(std::move(pts));
}

inline double dot(const std::vector<double>& g, const fpa::BidProbs& q) {
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i) s += g[i] * q[i];
    return s;
}

inline double l1(const fpa::BidProbs& a, const fpa::BidProbs& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace testutil
