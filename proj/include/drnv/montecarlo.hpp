#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "drnv/ambiguity.hpp"
#include "drnv/dist.hpp"

namespace drnv {

/// Replicates are grouped in fixed blocks; block b draws from stream
/// (master_seed, stream_base + b), independent of the thread count.
inline constexpr std::size_t kReplicateBlock = 8192;

std::vector<double> epsilon_grid(double step = 0.01, double upper = 1.0);

struct SimConfig {
    PredictiveCdf true_dist = PredictiveCdf::beta(2.0, 6.0);
    double true_tau = 0.75;
    std::size_t m = 10;                  // Bernoulli draws per replicate
    std::size_t replicates = 1'000'000;  // N
    std::vector<double> epsilons = epsilon_grid();
    double theta = 0.9;                  // level-adjusted shape
    std::uint64_t master_seed = 2023;
    std::uint64_t stream_base = 0;
    unsigned threads = 1;
};

/// Expected losses per arm. Oracle, BN and Robust are constant in epsilon;
/// the two DR arms are tabulated over the epsilon grid.
struct SimResult {
    std::vector<double> epsilons;
    double loss_oracle = 0.0;
    double loss_bn = 0.0;
    double loss_robust = 0.0;
    std::vector<double> loss_dr_uniform;
    std::vector<double> loss_dr_level_adjusted;
    std::vector<double> se_dr_uniform;  // Monte-Carlo standard errors
    std::vector<double> se_dr_level_adjusted;
    double se_bn = 0.0;
    std::size_t best_uniform = 0;  // argmin index into epsilons
    std::size_t best_level_adjusted = 0;
    double gamma_u = 0.0;
    double gamma_la = 0.0;
    /// Standard error of gamma_la - gamma_u from the paired per-replicate losses.
    double se_gamma_diff = 0.0;
    /// Replicate counts per number of successes k (tau_hat = k/m). Every arm
    /// is scored on these same draws.
    std::vector<std::uint64_t> success_counts;
    double runtime_seconds = 0.0;
};

/// gamma = (L_BN - L_DR*) / (L_BN - L_O). Throws DomainError if L_BN <= L_O.
double gamma(double loss_bn, double loss_oracle, double loss_dr_star);

/// Monte-Carlo epsilon sweep: per replicate draw m Bernoulli(true_tau)
/// outcomes, form tau_hat, offer with every arm, score each offer with the
/// analytic expected loss under (true_dist, true_tau), average over replicates.
SimResult run_epsilon_sweep(const SimConfig& config);

/// Same sweep with the binomial law of tau_hat in place of sampled counts.
SimResult epsilon_sweep_exact(const SimConfig& config);

struct MSweepPoint {
    std::size_t m = 0;
    double gamma_u = 0.0;
    double gamma_la = 0.0;
    double se_gamma_diff = 0.0;
    double best_epsilon_u = 0.0;
    double best_epsilon_la = 0.0;
};

/// Epsilon sweep for each m, best epsilon picked per m and ball kind.
std::vector<MSweepPoint> run_m_sweep(const SimConfig& config, const std::vector<std::size_t>& m_values);

/// Expected-loss table: rows follow `taus`, columns follow `ys`.
std::vector<std::vector<double>> loss_curve(const PredictiveCdf& dist, const std::vector<double>& taus,
                                            const std::vector<double>& ys);

void write_sweep_csv(std::ostream& out, const SimResult& result);
nlohmann::json sweep_summary_json(const SimConfig& config, const SimResult& result);
void write_msweep_csv(std::ostream& out, const std::vector<MSweepPoint>& points);
nlohmann::json msweep_summary_json(const SimConfig& config, const std::vector<MSweepPoint>& points);

}  // namespace drnv
