#include "drnv/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <boost/math/distributions/binomial.hpp>

#include "drnv/economics.hpp"
#include "drnv/errors.hpp"
#include "drnv/parallel.hpp"
#include "drnv/rng.hpp"
#include "drnv/solvers.hpp"

namespace drnv {

std::vector<double> epsilon_grid(double step, double upper) {
    if (!(step > 0.0) || !(upper >= 0.0)) throw DomainError("epsilon grid needs a positive step");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::llround(upper / step));
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * step);
    return grid;
}

double gamma(double loss_bn, double loss_oracle, double loss_dr_star) {
    if (!(loss_bn > loss_oracle))
        throw DomainError("gamma is undefined when the direct loss does not exceed the oracle loss");
    return (loss_bn - loss_dr_star) / (loss_bn - loss_oracle);
}

namespace {

void validate(const SimConfig& c) {
    if (c.replicates == 0) throw DomainError("simulation needs at least one replicate");
    if (c.m == 0) throw DomainError("simulation needs m >= 1 Bernoulli draws per replicate");
    if (!(c.true_tau >= 0.0 && c.true_tau <= 1.0)) throw DomainError("true tau must lie in [0,1]");
    if (c.epsilons.empty()) throw DomainError("epsilon grid is empty");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
        if (!(c.epsilons[i] >= 0.0 && c.epsilons[i] <= 1.0)) throw DomainError("epsilon grid values must lie in [0,1]");
        if (i > 0 && !(c.epsilons[i] > c.epsilons[i - 1])) throw DomainError("epsilon grid must be ascending");
    }
    if (!(c.theta >= 0.0 && c.theta < 1.0)) throw DomainError("theta must lie in [0,1)");
}

std::vector<std::uint64_t> draw_success_counts(const SimConfig& c) {
    const std::size_t blocks = (c.replicates + kReplicateBlock - 1) / kReplicateBlock;
    std::vector<std::vector<std::uint64_t>> per_block(blocks);
    parallel_for(blocks, c.threads, [&](std::size_t b) {
        RngStream rng(c.master_seed, c.stream_base + b);
        std::vector<std::uint64_t> counts(c.m + 1, 0);
        const std::size_t begin = b * kReplicateBlock;
        const std::size_t end = std::min(c.replicates, begin + kReplicateBlock);
        for (std::size_t r = begin; r < end; ++r) {
            std::size_t k = 0;
            for (std::size_t j = 0; j < c.m; ++j) k += rng.bernoulli(c.true_tau) ? 1 : 0;
            ++counts[k];
        }
        per_block[b] = std::move(counts);
    });
    std::vector<std::uint64_t> total(c.m + 1, 0);
    for (const auto& counts : per_block)
        for (std::size_t k = 0; k <= c.m; ++k) total[k] += counts[k];
    return total;
}

struct Weighted {
    double mean = 0.0;
    double se = 0.0;
};

// Mean and standard error of per-k losses under weights w_k (sum 1) from n replicates.
Weighted weighted(const std::vector<double>& w, const std::vector<double>& loss, double n) {
    Weighted out;
    for (std::size_t k = 0; k < w.size(); ++k) out.mean += w[k] * loss[k];
    if (n > 0.0) {
        double var = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) var += w[k] * (loss[k] - out.mean) * (loss[k] - out.mean);
        out.se = std::sqrt(var / n);
    }
    return out;
}

SimResult evaluate(const SimConfig& c, const std::vector<double>& w, double n) {
    const PredictiveCdf& dist = c.true_dist;
    const double tau = c.true_tau;
    const std::size_t K = c.m + 1;
    const std::size_t E = c.epsilons.size();

    auto score = [&](double y) { return expected_loss(dist, y, tau); };

    std::vector<double> oracle(K), bn(K), robust(K);
    const double y_oracle = direct_offer(dist, tau);
    const double y_robust = dist.mean();
    std::vector<std::vector<double>> uni(E, std::vector<double>(K)), la(E, std::vector<double>(K));

    parallel_for(K, c.threads, [&](std::size_t k) {
        const double tau_hat = static_cast<double>(k) / static_cast<double>(c.m);
        oracle[k] = score(y_oracle);
        bn[k] = score(direct_offer(dist, tau_hat));
        robust[k] = score(y_robust);
        for (std::size_t e = 0; e < E; ++e) {
            const auto ball_u = make_bernoulli_ball(tau_hat, c.epsilons[e], BallKind::Uniform);
            const auto ball_la = make_bernoulli_ball(tau_hat, c.epsilons[e], BallKind::LevelAdjusted, c.theta);
            uni[e][k] = score(dr_s_offer(dist, ball_u));
            la[e][k] = score(dr_s_offer(dist, ball_la));
        }
    });

    SimResult r;
    r.epsilons = c.epsilons;
    r.loss_oracle = weighted(w, oracle, n).mean;
    const Weighted wbn = weighted(w, bn, n);
    r.loss_bn = wbn.mean;
    r.se_bn = wbn.se;
    r.loss_robust = weighted(w, robust, n).mean;
    for (std::size_t e = 0; e < E; ++e) {
        const Weighted wu = weighted(w, uni[e], n);
        const Weighted wl = weighted(w, la[e], n);
        r.loss_dr_uniform.push_back(wu.mean);
        r.se_dr_uniform.push_back(wu.se);
        r.loss_dr_level_adjusted.push_back(wl.mean);
        r.se_dr_level_adjusted.push_back(wl.se);
    }
    // First minimizer, so ties resolve to the smaller radius.
    r.best_uniform = static_cast<std::size_t>(
        std::min_element(r.loss_dr_uniform.begin(), r.loss_dr_uniform.end()) - r.loss_dr_uniform.begin());
    r.best_level_adjusted = static_cast<std::size_t>(
        std::min_element(r.loss_dr_level_adjusted.begin(), r.loss_dr_level_adjusted.end()) -
        r.loss_dr_level_adjusted.begin());

    if (r.loss_bn > r.loss_oracle) {
        r.gamma_u = gamma(r.loss_bn, r.loss_oracle, r.loss_dr_uniform[r.best_uniform]);
        r.gamma_la = gamma(r.loss_bn, r.loss_oracle, r.loss_dr_level_adjusted[r.best_level_adjusted]);
        std::vector<double> diff(K);
        for (std::size_t k = 0; k < K; ++k) diff[k] = uni[r.best_uniform][k] - la[r.best_level_adjusted][k];
        r.se_gamma_diff = weighted(w, diff, n).se / (r.loss_bn - r.loss_oracle);
    }
    return r;
}

}  // namespace

SimResult run_epsilon_sweep(const SimConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const auto counts = draw_success_counts(config);
    const double n = static_cast<double>(config.replicates);
    std::vector<double> w(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) w[k] = static_cast<double>(counts[k]) / n;
    SimResult r = evaluate(config, w, n);
    r.success_counts = counts;
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SimResult epsilon_sweep_exact(const SimConfig& config) {
    validate(config);
    const boost::math::binomial_distribution<double> law(static_cast<double>(config.m), config.true_tau);
    std::vector<double> w(config.m + 1);
    for (std::size_t k = 0; k <= config.m; ++k) w[k] = boost::math::pdf(law, static_cast<double>(k));
    return evaluate(config, w, 0.0);
}

std::vector<MSweepPoint> run_m_sweep(const SimConfig& config, const std::vector<std::size_t>& m_values) {
    std::vector<MSweepPoint> points;
    points.reserve(m_values.size());
    for (std::size_t m : m_values) {
        SimConfig c = config;
        c.m = m;
        // Disjoint stream ranges per m.
        c.stream_base = config.stream_base + (static_cast<std::uint64_t>(m) << 32);
        const SimResult r = run_epsilon_sweep(c);
        points.push_back({m, r.gamma_u, r.gamma_la, r.se_gamma_diff, r.epsilons[r.best_uniform],
                          r.epsilons[r.best_level_adjusted]});
    }
    return points;
}

std::vector<std::vector<double>> loss_curve(const PredictiveCdf& dist, const std::vector<double>& taus,
                                            const std::vector<double>& ys) {
    std::vector<std::vector<double>> table;
    table.reserve(taus.size());
    for (double tau : taus) {
        std::vector<double> row;
        row.reserve(ys.size());
        for (double y : ys) row.push_back(expected_loss(dist, y, tau));
        table.push_back(std::move(row));
    }
    return table;
}

void write_sweep_csv(std::ostream& out, const SimResult& r) {
    out << "epsilon,arm,expected_loss\n" << std::setprecision(17);
    for (std::size_t e = 0; e < r.epsilons.size(); ++e) {
        const double eps = r.epsilons[e];
        out << eps << ",oracle," << r.loss_oracle << '\n';
        out << eps << ",bn," << r.loss_bn << '\n';
        out << eps << ",robust," << r.loss_robust << '\n';
        out << eps << ",dr-uniform," << r.loss_dr_uniform[e] << '\n';
        out << eps << ",dr-level-adjusted," << r.loss_dr_level_adjusted[e] << '\n';
    }
}

namespace {
nlohmann::json config_json(const SimConfig& c) {
    return {
        {"dist", c.true_dist.describe()},
        {"tau", c.true_tau},
        {"m", c.m},
        {"n", c.replicates},
        {"theta", c.theta},
        {"epsilon_grid", {{"first", c.epsilons.front()}, {"last", c.epsilons.back()}, {"count", c.epsilons.size()}}},
    };
}
}  // namespace

nlohmann::json sweep_summary_json(const SimConfig& config, const SimResult& r) {
    return {
        {"gamma_u", r.gamma_u},
        {"gamma_la", r.gamma_la},
        {"se_gamma_diff", r.se_gamma_diff},
        {"seed", config.master_seed},
        {"config", config_json(config)},
        {"losses",
         {{"oracle", r.loss_oracle},
          {"bn", r.loss_bn},
          {"robust", r.loss_robust},
          {"dr_uniform_min", r.loss_dr_uniform[r.best_uniform]},
          {"dr_level_adjusted_min", r.loss_dr_level_adjusted[r.best_level_adjusted]}}},
        {"best_epsilon_u", r.epsilons[r.best_uniform]},
        {"best_epsilon_la", r.epsilons[r.best_level_adjusted]},
        {"success_counts", r.success_counts},
    };
}

void write_msweep_csv(std::ostream& out, const std::vector<MSweepPoint>& points) {
    out << "m,gamma_u,gamma_la,se_gamma_diff,best_epsilon_u,best_epsilon_la\n" << std::setprecision(17);
    for (const auto& p : points)
        out << p.m << ',' << p.gamma_u << ',' << p.gamma_la << ',' << p.se_gamma_diff << ',' << p.best_epsilon_u
            << ',' << p.best_epsilon_la << '\n';
}

nlohmann::json msweep_summary_json(const SimConfig& config, const std::vector<MSweepPoint>& points) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points)
        rows.push_back({{"m", p.m},
                        {"gamma_u", p.gamma_u},
                        {"gamma_la", p.gamma_la},
                        {"se_gamma_diff", p.se_gamma_diff},
                        {"best_epsilon_u", p.best_epsilon_u},
                        {"best_epsilon_la", p.best_epsilon_la}});
    nlohmann::json cfg = config_json(config);
    cfg.erase("m");
    return {{"seed", config.master_seed}, {"config", cfg}, {"points", rows}};
}

}  // namespace drnv
