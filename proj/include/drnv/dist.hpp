#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "drnv/rng.hpp"

namespace drnv {

/// Expected imbalance volumes at an offer y:
///   under = int_0^y F(x) dx      = E[(y - w)_+]   (overage of the offer)
///   over  = int_y^1 (1 - F(x)) dx = E[(w - y)_+]   (underage of the offer)
struct PartialExpectations {
    double under = 0.0;
    double over = 0.0;
};

enum class CdfKind { PiecewiseLinear, Beta, Uniform01, Heaviside, Deformed, WorstCase };

enum class Deformation { Upper, Lower };

/// Distribution of normalized generation on [0,1].
///
/// Immutable value type; copies share the underlying representation and may
/// be used from any number of threads. Parametric and piecewise-linear
/// representations are built by the named constructors below; the deformed
/// and worst-case forms are produced by the ambiguity and solver modules.
class PredictiveCdf {
public:
    /// Piecewise-linear CDF through (values[i], levels[i]), anchored at (0,0)
    /// and (1,1). Levels must be strictly increasing in (0,1), values
    /// non-decreasing in [0,1]. Throws DomainError otherwise.
    static PredictiveCdf piecewise_linear(std::vector<double> levels, std::vector<double> values);
    static PredictiveCdf beta(double a, double b);
    static PredictiveCdf uniform();
    /// Point mass at `location` in [0,1].
    static PredictiveCdf heaviside(double location);

    /// O(reference) for the double-power operator on `side`, rho in [0,1).
    static PredictiveCdf deformed(PredictiveCdf reference, double rho, Deformation side);
    /// upper below upper^{-1}(tau), flat at tau, lower above lower^{-1}(tau).
    static PredictiveCdf worst_case(PredictiveCdf upper, PredictiveCdf lower, double tau);

    CdfKind kind() const;

    /// P[w <= x]; 0 below the unit interval, 1 at and above 1.
    double cdf(double x) const;
    /// Generalized inverse inf{x in [0,1] : cdf(x) >= p}, with quantile(0) = 0.
    double quantile(double p) const;
    double mean() const;
    PartialExpectations partial_expectations(double y) const;
    /// n inverse-transform draws.
    std::vector<double> sample(RngStream& rng, std::size_t n) const;

    /// Points in (0,1) where the CDF may be non-smooth.
    std::vector<double> breakpoints() const;
    /// Short text form, e.g. "beta:2,6" or "piecewise:19".
    std::string describe() const;

    /// Knots including the (0,0)/(1,1) anchors. Empty unless kind() is PiecewiseLinear.
    const std::vector<double>& knot_values() const;
    const std::vector<double>& knot_levels() const;

    struct Node;

private:
    explicit PredictiveCdf(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse a quantile forecast in CSV form (`level,value` header, ascending levels).
PredictiveCdf parse_quantile_csv(std::istream& in, const std::string& source = "<stream>");
PredictiveCdf read_quantile_csv(const std::string& path);
void write_quantile_csv(std::ostream& out, const std::vector<double>& levels,
                        const std::vector<double>& values);

/// Levels 0.025, 0.075, ..., 0.975 used by the day-ahead quantile forecasts.
std::vector<double> standard_quantile_levels();

/// Piecewise-linear summary of `dist` at the given levels.
PredictiveCdf summarize_quantiles(const PredictiveCdf& dist, const std::vector<double>& levels);

}  // namespace drnv
