#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical paths.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double beta_pdf(double a, double b, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    return std::exp(log_norm + (a - 1) * std::log(x) + (b - 1) * std::log1p(-x));
}

inline double beta_cdf(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return integrate([=](double t) { return beta_pdf(a, b, t); }, 0.0, x, 1e-13);
}

/// inf{x : cdf(x) >= p} by bisection.
inline double bisect_quantile(const std::function<double(double)>& cdf, double p, double tol = 1e-12) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= p ? hi : lo) = mid;
    }
    return hi;
}

/// Expected Bernoulli-newsvendor loss from a tabulated CDF by the trapezoid rule.
struct TabulatedLoss {
    std::vector<double> xs, cum_cdf, cum_surv;

    TabulatedLoss(const std::function<double(double)>& cdf, std::size_t n) {
        xs.resize(n + 1);
        cum_cdf.assign(n + 1, 0.0);
        cum_surv.assign(n + 1, 0.0);
        std::vector<double> f(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            xs[i] = static_cast<double>(i) / static_cast<double>(n);
            f[i] = cdf(xs[i]);
        }
        for (std::size_t i = 1; i <= n; ++i) {
            const double h = xs[i] - xs[i - 1];
            cum_cdf[i] = cum_cdf[i - 1] + 0.5 * h * (f[i] + f[i - 1]);
            cum_surv[i] = cum_surv[i - 1] + 0.5 * h * (2.0 - f[i] - f[i - 1]);
        }
    }

    double loss(double y, double tau) const {
        const double pos = y * static_cast<double>(xs.size() - 1);
        const auto i = static_cast<std::size_t>(std::min(pos, static_cast<double>(xs.size() - 2)));
        const double frac = pos - static_cast<double>(i);
        const double under = cum_cdf[i] + frac * (cum_cdf[i + 1] - cum_cdf[i]);
        const double surv_to_y = cum_surv[i] + frac * (cum_surv[i + 1] - cum_surv[i]);
        const double over = cum_surv.back() - surv_to_y;
        return (1.0 - tau) * under + tau * over;
    }
};

}  // namespace oracle
