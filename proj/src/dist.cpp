#include "drnv/dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <variant>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "drnv/deformation.hpp"
#include "drnv/errors.hpp"

namespace drnv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct PiecewiseRep {
    std::vector<double> xs;  // knot values, anchored at 0 and 1
    std::vector<double> ps;  // knot levels, anchored at 0 and 1
};

struct BetaRep {
    double a;
    double b;
};

struct UniformRep {};

struct HeavisideRep {
    double location;
};

struct DeformedRep {
    PredictiveCdf reference;
    double rho;
    Deformation side;
};

struct WorstCaseRep {
    PredictiveCdf upper;
    PredictiveCdf lower;
    double tau;
    double q_upper;  // upper^{-1}(tau)
    double q_lower;  // lower^{-1}(tau)
};

std::string fmt_num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0,1], got " + fmt_num(p));
}

// int_a^b F for a piecewise-linear F, 0 <= a <= b <= 1.
double piecewise_cdf_integral(const PiecewiseRep& r, double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.xs.size(); ++i) {
        const double x0 = r.xs[i], x1 = r.xs[i + 1];
        if (x1 <= x0) continue;
        const double lo = std::max(a, x0), hi = std::min(b, x1);
        if (hi <= lo) continue;
        const double slope = (r.ps[i + 1] - r.ps[i]) / (x1 - x0);
        const double f_lo = r.ps[i] + slope * (lo - x0);
        const double f_hi = r.ps[i] + slope * (hi - x0);
        total += 0.5 * (f_lo + f_hi) * (hi - lo);
    }
    return total;
}

// int_a^b (1 - F) for a piecewise-linear F.
double piecewise_survival_integral(const PiecewiseRep& r, double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.xs.size(); ++i) {
        const double x0 = r.xs[i], x1 = r.xs[i + 1];
        if (x1 <= x0) continue;
        const double lo = std::max(a, x0), hi = std::min(b, x1);
        if (hi <= lo) continue;
        const double slope = (r.ps[i + 1] - r.ps[i]) / (x1 - x0);
        const double s_lo = 1.0 - (r.ps[i] + slope * (lo - x0));
        const double s_hi = 1.0 - (r.ps[i] + slope * (hi - x0));
        total += 0.5 * (s_lo + s_hi) * (hi - lo);
    }
    return total;
}

boost::math::quadrature::tanh_sinh<double>& integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> instance;
    return instance;
}

// int over [a,b] of f, split at the given breakpoints. Integrands are bounded
// CDF-like functions, possibly with infinite slope at the split points.
template <class F>
double integrate_split(F&& f, double a, double b, std::vector<double> cuts) {
    if (b <= a) return 0.0;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
        if (hi - lo <= 1e-15) continue;
        // Evaluate strictly inside the sub-interval so step functions take the
        // value they hold on its interior.
        auto g = [&](double x) { return f(std::clamp(x, lo, hi)); };
        total += integrator().integrate(g, lo, hi, 1e-12);
    }
    return total;
}

// Deformed levels reach far into the tails (p ~ 1e-300 at high rho), where
// the Newton iteration inside ibeta_inv can stall; bisection on ibeta in log x
// takes over there.
double beta_quantile(const BetaRep& r, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    using Policy = boost::math::policies::policy<boost::math::policies::max_root_iterations<2000>>;
    try {
        return boost::math::ibeta_inv(r.a, r.b, p, Policy());
    } catch (const boost::math::evaluation_error&) {
    }
    double lo = std::log(std::numeric_limits<double>::denorm_min()), hi = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::abs(lo); ++i) {
        const double mid = 0.5 * (lo + hi);
        (boost::math::ibeta(r.a, r.b, std::exp(mid)) < p ? lo : hi) = mid;
    }
    return std::exp(hi);
}

}  // namespace

struct PredictiveCdf::Node {
    std::variant<PiecewiseRep, BetaRep, UniformRep, HeavisideRep, DeformedRep, WorstCaseRep> rep;
    double mean = 0.0;
};

// --- construction ---------------------------------------------------------

PredictiveCdf PredictiveCdf::piecewise_linear(std::vector<double> levels, std::vector<double> values) {
    if (levels.empty() || levels.size() != values.size())
        throw DomainError("piecewise-linear CDF needs equally many levels and values (got " +
                          std::to_string(levels.size()) + " and " + std::to_string(values.size()) + ")");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] < 1.0))
            throw DomainError("quantile level " + fmt_num(levels[i]) + " outside (0,1)");
        if (!(values[i] >= 0.0 && values[i] <= 1.0))
            throw DomainError("quantile value " + fmt_num(values[i]) + " outside [0,1]");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw DomainError("quantile levels must be strictly increasing");
        if (i > 0 && values[i] < values[i - 1])
            throw DomainError("quantile values must be non-decreasing");
    }
    PiecewiseRep rep;
    rep.xs.reserve(levels.size() + 2);
    rep.ps.reserve(levels.size() + 2);
    rep.xs.push_back(0.0);
    rep.ps.push_back(0.0);
    rep.xs.insert(rep.xs.end(), values.begin(), values.end());
    rep.ps.insert(rep.ps.end(), levels.begin(), levels.end());
    rep.xs.push_back(1.0);
    rep.ps.push_back(1.0);

    auto node = std::make_shared<Node>();
    node->mean = piecewise_survival_integral(rep, 0.0, 1.0);
    node->rep = std::move(rep);
    return PredictiveCdf(std::move(node));
}

PredictiveCdf PredictiveCdf::beta(double a, double b) {
    if (!(a > 0.0 && std::isfinite(a) && b > 0.0 && std::isfinite(b)))
        throw DomainError("beta parameters must be positive and finite");
    auto node = std::make_shared<Node>();
    node->rep = BetaRep{a, b};
    node->mean = a / (a + b);
    return PredictiveCdf(std::move(node));
}

PredictiveCdf PredictiveCdf::uniform() {
    auto node = std::make_shared<Node>();
    node->rep = UniformRep{};
    node->mean = 0.5;
    return PredictiveCdf(std::move(node));
}

PredictiveCdf PredictiveCdf::heaviside(double location) {
    check_probability(location, "heaviside location");
    auto node = std::make_shared<Node>();
    node->rep = HeavisideRep{location};
    node->mean = location;
    return PredictiveCdf(std::move(node));
}

PredictiveCdf PredictiveCdf::deformed(PredictiveCdf reference, double rho, Deformation side) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("deformation radius must lie in [0,1), got " + fmt_num(rho));
    auto node = std::make_shared<Node>();
    node->rep = DeformedRep{std::move(reference), rho, side};
    PredictiveCdf out(node);
    node->mean = out.partial_expectations(0.0).over;
    return out;
}

PredictiveCdf PredictiveCdf::worst_case(PredictiveCdf upper, PredictiveCdf lower, double tau) {
    check_probability(tau, "chance of success");
    const double q_up = upper.quantile(tau);
    const double q_low = lower.quantile(tau);
    if (q_low < q_up) throw DomainError("worst-case bounds are not ordered (lower must dominate upper)");
    auto node = std::make_shared<Node>();
    node->rep = WorstCaseRep{std::move(upper), std::move(lower), tau, q_up, q_low};
    PredictiveCdf out(node);
    node->mean = out.partial_expectations(0.0).over;
    return out;
}

CdfKind PredictiveCdf::kind() const {
    return std::visit(overloaded{
                          [](const PiecewiseRep&) { return CdfKind::PiecewiseLinear; },
                          [](const BetaRep&) { return CdfKind::Beta; },
                          [](const UniformRep&) { return CdfKind::Uniform01; },
                          [](const HeavisideRep&) { return CdfKind::Heaviside; },
                          [](const DeformedRep&) { return CdfKind::Deformed; },
                          [](const WorstCaseRep&) { return CdfKind::WorstCase; },
                      },
                      node_->rep);
}

// --- evaluation -----------------------------------------------------------

double PredictiveCdf::cdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return std::visit(
        overloaded{
            [x](const PiecewiseRep& r) {
                // Last knot at or left of x; right-continuous at repeated values.
                const auto it = std::upper_bound(r.xs.begin(), r.xs.end(), x);
                const std::size_t i = static_cast<std::size_t>(it - r.xs.begin()) - 1;
                const double x0 = r.xs[i], x1 = r.xs[i + 1];
                return r.ps[i] + (r.ps[i + 1] - r.ps[i]) * (x - x0) / (x1 - x0);
            },
            [x](const BetaRep& r) { return boost::math::ibeta(r.a, r.b, x); },
            [x](const UniformRep&) { return x; },
            [x](const HeavisideRep& r) { return x >= r.location ? 1.0 : 0.0; },
            [x](const DeformedRep& r) {
                const double u = r.reference.cdf(x);
                return r.side == Deformation::Upper ? deform_upper_value(u, r.rho)
                                                    : deform_lower_value(u, r.rho);
            },
            [x](const WorstCaseRep& r) {
                if (x < r.q_upper) return r.upper.cdf(x);
                if (x < r.q_lower) return r.tau;
                return r.lower.cdf(x);
            },
        },
        node_->rep);
}

double PredictiveCdf::quantile(double p) const {
    check_probability(p, "quantile level");
    if (p == 0.0) return 0.0;
    return std::visit(
        overloaded{
            [p](const PiecewiseRep& r) {
                const auto it = std::lower_bound(r.ps.begin(), r.ps.end(), p);
                const std::size_t j = static_cast<std::size_t>(it - r.ps.begin());
                const double x0 = r.xs[j - 1], x1 = r.xs[j];
                const double p0 = r.ps[j - 1], p1 = r.ps[j];
                return std::min(x1, x0 + (x1 - x0) * (p - p0) / (p1 - p0));
            },
            [p](const BetaRep& r) { return beta_quantile(r, p); },
            [p](const UniformRep&) { return p; },
            [](const HeavisideRep& r) { return r.location; },
            [p](const DeformedRep& r) {
                const double u = r.side == Deformation::Upper ? deform_upper_inverse(p, r.rho)
                                                              : deform_lower_inverse(p, r.rho);
                return r.reference.quantile(std::clamp(u, 0.0, 1.0));
            },
            [p](const WorstCaseRep& r) {
                if (p < r.tau) return r.upper.quantile(p);
                if (p == r.tau) return r.q_upper;
                return r.lower.quantile(p);
            },
        },
        node_->rep);
}

double PredictiveCdf::mean() const { return node_->mean; }

PartialExpectations PredictiveCdf::partial_expectations(double y) const {
    check_probability(y, "offer");
    return std::visit(
        overloaded{
            [y](const PiecewiseRep& r) {
                return PartialExpectations{piecewise_cdf_integral(r, 0.0, y),
                                           piecewise_survival_integral(r, y, 1.0)};
            },
            [y](const BetaRep& r) {
                using boost::math::ibeta;
                using boost::math::ibetac;
                // int_0^y F = y F(y) - E[w; w <= y],  E[w; w <= y] = mean * I_y(a+1, b)
                const double m = r.a / (r.a + r.b);
                const double under = y * ibeta(r.a, r.b, y) - m * ibeta(r.a + 1.0, r.b, y);
                const double over = m * ibetac(r.a + 1.0, r.b, y) - y * ibetac(r.a, r.b, y);
                return PartialExpectations{std::max(under, 0.0), std::max(over, 0.0)};
            },
            [y](const UniformRep&) {
                return PartialExpectations{0.5 * y * y, 0.5 * (1.0 - y) * (1.0 - y)};
            },
            [y](const HeavisideRep& r) {
                return PartialExpectations{std::max(0.0, y - r.location), std::max(0.0, r.location - y)};
            },
            [this, y](const auto&) {
                const auto cuts = breakpoints();
                const double under = integrate_split([this](double x) { return cdf(x); }, 0.0, y, cuts);
                const double over =
                    integrate_split([this](double x) { return 1.0 - cdf(x); }, y, 1.0, cuts);
                return PartialExpectations{under, over};
            },
        },
        node_->rep);
}

std::vector<double> PredictiveCdf::sample(RngStream& rng, std::size_t n) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(rng.uniform()));
    return out;
}

std::vector<double> PredictiveCdf::breakpoints() const {
    std::vector<double> cuts = std::visit(
        overloaded{
            [](const PiecewiseRep& r) { return r.xs; },
            [](const BetaRep&) { return std::vector<double>{}; },
            [](const UniformRep&) { return std::vector<double>{}; },
            [](const HeavisideRep& r) { return std::vector<double>{r.location}; },
            [](const DeformedRep& r) { return r.reference.breakpoints(); },
            [](const WorstCaseRep& r) {
                auto a = r.upper.breakpoints();
                const auto b = r.lower.breakpoints();
                a.insert(a.end(), b.begin(), b.end());
                a.push_back(r.q_upper);
                a.push_back(r.q_lower);
                return a;
            },
        },
        node_->rep);
    std::erase_if(cuts, [](double c) { return !(c > 0.0 && c < 1.0); });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

std::string PredictiveCdf::describe() const {
    return std::visit(
        overloaded{
            [](const PiecewiseRep& r) { return "piecewise:" + std::to_string(r.xs.size() - 2); },
            [](const BetaRep& r) { return "beta:" + fmt_num(r.a) + "," + fmt_num(r.b); },
            [](const UniformRep&) { return std::string("uniform"); },
            [](const HeavisideRep& r) { return "heaviside:" + fmt_num(r.location); },
            [](const DeformedRep& r) {
                return std::string(r.side == Deformation::Upper ? "upper" : "lower") + "(" +
                       r.reference.describe() + ";rho=" + fmt_num(r.rho) + ")";
            },
            [](const WorstCaseRep& r) {
                return "worst_case(" + r.upper.describe() + "|" + r.lower.describe() +
                       ";tau=" + fmt_num(r.tau) + ")";
            },
        },
        node_->rep);
}

const std::vector<double>& PredictiveCdf::knot_values() const {
    static const std::vector<double> empty;
    const auto* r = std::get_if<PiecewiseRep>(&node_->rep);
    return r ? r->xs : empty;
}

const std::vector<double>& PredictiveCdf::knot_levels() const {
    static const std::vector<double> empty;
    const auto* r = std::get_if<PiecewiseRep>(&node_->rep);
    return r ? r->ps : empty;
}

// --- quantile files -------------------------------------------------------

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_field(const std::string& text, const std::string& source, std::size_t row, const char* column) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw DataError(source + ": row " + std::to_string(row) + ", column '" + column +
                        "': not a number: '" + t + "'");
    }
}

}  // namespace

PredictiveCdf parse_quantile_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty quantile file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line) != "level,value")
        throw DataError(source + ": expected header 'level,value', got '" + line + "'");

    std::vector<double> levels, values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw DataError(source + ": row " + std::to_string(row) + ": expected 2 columns");
        levels.push_back(parse_field(line.substr(0, comma), source, row, "level"));
        values.push_back(parse_field(line.substr(comma + 1), source, row, "value"));
    }
    if (levels.empty()) throw DataError(source + ": no quantile rows");
    try {
        return PredictiveCdf::piecewise_linear(std::move(levels), std::move(values));
    } catch (const DomainError& e) {
        throw DataError(source + ": " + e.what());
    }
}

PredictiveCdf read_quantile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open quantile file '" + path + "'");
    return parse_quantile_csv(in, path);
}

void write_quantile_csv(std::ostream& out, const std::vector<double>& levels, const std::vector<double>& values) {
    out << "level,value\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < levels.size(); ++i) out << levels[i] << ',' << values[i] << '\n';
}

std::vector<double> standard_quantile_levels() {
    std::vector<double> levels;
    for (int i = 0; i < 20; ++i) levels.push_back(0.025 + 0.05 * i);
    return levels;
}

PredictiveCdf summarize_quantiles(const PredictiveCdf& dist, const std::vector<double>& levels) {
    std::vector<double> values;
    values.reserve(levels.size());
    for (double p : levels) values.push_back(dist.quantile(p));
    for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
    return PredictiveCdf::piecewise_linear(levels, std::move(values));
}

}  // namespace drnv
