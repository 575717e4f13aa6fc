#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drnv/economics.hpp"
#include "drnv/errors.hpp"
#include "drnv/montecarlo.hpp"

using namespace drnv;

namespace {

SimConfig small_config(std::size_t n, unsigned threads) {
    SimConfig c;
    c.replicates = n;
    c.threads = threads;
    return c;
}

}  // namespace

TEST_CASE("gamma measure") {
    CHECK(gamma(0.06, 0.05, 0.06) == 0.0);
    CHECK(gamma(0.06, 0.05, 0.05) == 1.0);
    CHECK(gamma(0.06, 0.05, 0.055) == doctest::Approx(0.5));
    CHECK_THROWS_AS(gamma(0.05, 0.05, 0.05), DomainError);
    CHECK_THROWS_AS(gamma(0.04, 0.05, 0.05), DomainError);
}

TEST_CASE("epsilon grid") {
    const auto g = epsilon_grid();
    REQUIRE(g.size() == 101);
    CHECK(g.front() == 0.0);
    CHECK(g[37] == 0.37);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(epsilon_grid(0.0), DomainError);
}

TEST_CASE("config validation") {
    SimConfig c = small_config(10, 1);
    c.replicates = 0;
    CHECK_THROWS_AS(run_epsilon_sweep(c), DomainError);
    c = small_config(10, 1);
    c.epsilons = {0.2, 0.1};
    CHECK_THROWS_AS(run_epsilon_sweep(c), DomainError);
    c = small_config(10, 1);
    c.m = 0;
    CHECK_THROWS_AS(run_epsilon_sweep(c), DomainError);
}

TEST_CASE("bit-identical results regardless of thread count") {
    const auto a = run_epsilon_sweep(small_config(50'000, 1));
    const auto b = run_epsilon_sweep(small_config(50'000, 8));
    CHECK(a.success_counts == b.success_counts);
    CHECK(a.loss_bn == b.loss_bn);
    CHECK(a.loss_dr_uniform == b.loss_dr_uniform);
    CHECK(a.loss_dr_level_adjusted == b.loss_dr_level_adjusted);
    CHECK(a.gamma_u == b.gamma_u);
    CHECK(a.gamma_la == b.gamma_la);
    CHECK(std::accumulate(a.success_counts.begin(), a.success_counts.end(), std::uint64_t{0}) == 50'000);

    SimConfig other = small_config(50'000, 1);
    other.master_seed = 7;
    CHECK(run_epsilon_sweep(other).success_counts != a.success_counts);
}

TEST_CASE("endpoint identities of the DR curves") {
    const auto r = run_epsilon_sweep(small_config(100'000, 1));
    CHECK(r.loss_dr_uniform.front() == r.loss_bn);
    CHECK(r.loss_dr_level_adjusted.front() == r.loss_bn);
    CHECK(r.loss_dr_uniform.back() == r.loss_robust);
    for (std::size_t e = 0; e < r.epsilons.size(); ++e) {
        CHECK(r.loss_oracle <= r.loss_dr_uniform[e]);
        CHECK(r.loss_oracle <= r.loss_dr_level_adjusted[e]);
        CHECK(r.loss_dr_uniform[e] <= std::max(r.loss_bn, r.loss_robust) + 1e-12);
    }
    CHECK(r.loss_oracle < r.loss_bn);
    CHECK(r.loss_oracle < r.loss_robust);
}

TEST_CASE("exact epsilon sweep reproduces independently computed losses") {
    // Frozen from an independent evaluation with binomial weights and
    // closed-form Beta(2,6) partial expectations.
    SimConfig c;
    const auto r = epsilon_sweep_exact(c);
    CHECK(r.loss_oracle == doctest::Approx(0.05004811150900724).epsilon(1e-10));
    CHECK(r.loss_bn == doctest::Approx(0.06196571886610207).epsilon(1e-10));
    CHECK(r.loss_robust == doctest::Approx(0.05839920043945311).epsilon(1e-10));
    CHECK(std::abs(r.gamma_u - 0.65426) < 1e-4);
    CHECK(std::abs(r.gamma_la - 0.76082) < 1e-4);

    c.m = 15;
    const auto r15 = epsilon_sweep_exact(c);
    CHECK(std::abs(r15.gamma_u - 0.40141) < 1e-4);
    CHECK(std::abs(r15.gamma_la - 0.59907) < 1e-4);

    c.m = 40;
    const auto r40 = epsilon_sweep_exact(c);
    CHECK(std::abs(r40.gamma_u - 0.0411) < 1e-3);
    CHECK(std::abs(r40.gamma_la - 0.2384) < 1e-3);
}

TEST_CASE("Monte-Carlo sweep agrees with the exact sweep" * doctest::timeout(120)) {
    const auto mc = run_epsilon_sweep(small_config(1'000'000, 0));
    const auto ex = epsilon_sweep_exact(small_config(1, 1));
    CHECK(std::abs(mc.loss_bn - ex.loss_bn) <= 4 * mc.se_bn);
    CHECK(std::abs(mc.gamma_u - ex.gamma_u) < 0.02);
    CHECK(std::abs(mc.gamma_la - ex.gamma_la) < 0.02);
}

TEST_CASE("m sweep: large m leaves nothing to robustify" * doctest::timeout(300)) {
    SimConfig c = small_config(20'000, 0);
    c.epsilons = epsilon_grid(0.02);
    const auto points = run_m_sweep(c, {1, 10, 10'000});
    REQUIRE(points.size() == 3);
    CHECK(points[0].m == 1);
    CHECK(points[0].gamma_u > points[1].gamma_u);
    CHECK(std::abs(points[2].gamma_u) < 0.05);
    CHECK(std::abs(points[2].gamma_la) < 0.05);
}

TEST_CASE("loss curves") {
    const auto f = PredictiveCdf::beta(2, 6);
    std::vector<double> ys;
    for (int i = 0; i <= 1000; ++i) ys.push_back(i / 1000.0);
    const std::vector<double> taus{0.1, 0.3, 0.5, 0.75, 0.9};
    const auto table = loss_curve(f, taus, ys);
    REQUIRE(table.size() == taus.size());

    const auto at_mean = loss_curve(f, taus, {0.25});
    for (const auto& row : at_mean) CHECK(row[0] == doctest::Approx(at_mean[0][0]).epsilon(1e-12));

    for (std::size_t t = 0; t < taus.size(); ++t) {
        const auto argmin = std::min_element(table[t].begin(), table[t].end()) - table[t].begin();
        CHECK(std::abs(ys[static_cast<std::size_t>(argmin)] - f.quantile(taus[t])) <= 1e-3);
    }

    // Worst case over {tau_lo, tau_hi}: the upper-tau curve left of the mean,
    // the lower-tau curve right of it.
    const auto envelope = loss_curve(f, {0.7, 0.8}, ys);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i] < 0.249) CHECK(envelope[1][i] > envelope[0][i]);
        if (ys[i] > 0.251) CHECK(envelope[0][i] > envelope[1][i]);
    }
}

TEST_CASE("exports") {
    SimConfig c = small_config(1000, 1);
    c.epsilons = {0.0, 0.5, 1.0};
    const auto r = run_epsilon_sweep(c);
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "epsilon,arm,expected_loss");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 15);

    const auto j = sweep_summary_json(c, r);
    CHECK(j.at("seed") == 2023);
    CHECK(j.at("gamma_u").get<double>() == r.gamma_u);
    CHECK(j.at("config").at("dist") == "beta:2,6");
    CHECK(j.at("config").at("m") == 10);
}
