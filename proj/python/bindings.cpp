#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drnv/ambiguity.hpp"
#include "drnv/backtest.hpp"
#include "drnv/economics.hpp"
#include "drnv/errors.hpp"
#include "drnv/montecarlo.hpp"
#include "drnv/solvers.hpp"

namespace py = pybind11;
using namespace drnv;

namespace {

py::dict decision_dict(const OfferDecision& d) {
    py::dict out;
    out["y_star"] = d.y_star;
    out["method"] = to_string(d.method);
    out["diagnostics"] = d.diagnostics;
    return out;
}

SimConfig sim_config(const PredictiveCdf& dist, double tau, std::size_t m, std::size_t n, double theta,
                     double eps_step, double eps_max, std::uint64_t seed, unsigned threads) {
    SimConfig c;
    c.true_dist = dist;
    c.true_tau = tau;
    c.m = m;
    c.replicates = n;
    c.theta = theta;
    c.epsilons = epsilon_grid(eps_step, eps_max);
    c.master_seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Bernoulli newsvendor offers, robust variants, simulations and backtests";

    py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<DataError>(mod, "DataError", PyExc_ValueError);

    py::class_<PredictiveCdf>(mod, "PredictiveCdf")
        .def_static("beta", &PredictiveCdf::beta, py::arg("a"), py::arg("b"))
        .def_static("uniform", &PredictiveCdf::uniform)
        .def_static("heaviside", &PredictiveCdf::heaviside, py::arg("location"))
        .def_static("piecewise_linear", &PredictiveCdf::piecewise_linear, py::arg("levels"), py::arg("values"))
        .def("cdf", &PredictiveCdf::cdf, py::arg("x"))
        .def("quantile", &PredictiveCdf::quantile, py::arg("p"))
        .def("mean", &PredictiveCdf::mean)
        .def("describe", &PredictiveCdf::describe)
        .def("__repr__", [](const PredictiveCdf& f) { return "PredictiveCdf(" + f.describe() + ")"; });

    mod.def("deform_upper_value", &deform_upper_value, py::arg("u"), py::arg("rho"));
    mod.def("deform_lower_value", &deform_lower_value, py::arg("u"), py::arg("rho"));
    mod.def("expected_loss", &expected_loss, py::arg("dist"), py::arg("y"), py::arg("tau"));

    mod.def("solve_direct", [](const PredictiveCdf& f, double tau) { return decision_dict(solve_direct(f, tau)); },
            py::arg("forecast"), py::arg("tau_hat"));
    mod.def("solve_dr_omega",
            [](const PredictiveCdf& f, double tau, double rho) { return decision_dict(solve_dr_omega(f, tau, rho)); },
            py::arg("forecast"), py::arg("tau_hat"), py::arg("rho"));
    mod.def(
        "solve_dr_s",
        [](const PredictiveCdf& f, double tau, double eps, const std::string& ball, double theta) {
            return decision_dict(solve_dr_s(f, make_bernoulli_ball(tau, eps, parse_ball_kind(ball), theta)));
        },
        py::arg("forecast"), py::arg("tau_hat"), py::arg("epsilon"), py::arg("ball") = "uniform",
        py::arg("theta") = 0.0);

    mod.def(
        "epsilon_sweep",
        [](const PredictiveCdf& dist, double tau, std::size_t m, std::size_t n, double theta, double eps_step,
           double eps_max, std::uint64_t seed, unsigned threads, bool exact) {
            const SimConfig c = sim_config(dist, tau, m, n, theta, eps_step, eps_max, seed, threads);
            SimResult r;
            {
                py::gil_scoped_release release;
                r = exact ? epsilon_sweep_exact(c) : run_epsilon_sweep(c);
            }
            return sweep_summary_json(c, r).dump();
        },
        py::arg("dist"), py::arg("tau") = 0.75, py::arg("m") = 10, py::arg("n") = 1'000'000, py::arg("theta") = 0.9,
        py::arg("eps_step") = 0.01, py::arg("eps_max") = 1.0, py::arg("seed") = 2023, py::arg("threads") = 1,
        py::arg("exact") = false);

    mod.def(
        "synthetic_backtest",
        [](int days, std::uint64_t seed, const std::string& cv_mode, double penalty_factor, unsigned threads) {
            SyntheticMarketConfig cfg;
            cfg.days = days;
            cfg.seed = seed;
            cfg.threads = threads;
            BacktestPlan plan;
            plan.cv_mode = parse_cv_mode(cv_mode);
            plan.threads = threads;
            std::string out;
            {
                py::gil_scoped_release release;
                auto recs = generate_synthetic_market(cfg);
                if (penalty_factor != 1.0) recs = scale_penalties(recs, penalty_factor);
                out = report_json(run_backtest(recs, plan)).dump();
            }
            return out;
        },
        py::arg("days") = 731, py::arg("seed") = 2023, py::arg("cv_mode") = "sliding", py::arg("penalty_factor") = 1.0,
        py::arg("threads") = 1);
}
