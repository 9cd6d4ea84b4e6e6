#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fixiter/convergence.hpp"
#include "fixiter/errors.hpp"
#include "fixiter/schemes.hpp"
#include "fixiter/space.hpp"

namespace fixiter {

/// Initial-value problem with retarded argument
///   x'(t) = f(t, x(t), x(t - tau)),  t in [t0, b],
///   x(t)  = history(t),              t in [t0 - tau, t0].
struct DDEProblem {
    double t0 = 0.0;
    double b = 0.0;
    double tau = 0.0;
    std::function<double(double, double, double)> rhs;  // f(t, u, v)
    double lipschitz = 0.0;                             // declared L_f (sum form)
    std::function<double(double)> history;              // psi on [t0 - tau, t0]
};

struct ConditionCheck {
    std::string name;
    bool passed = false;
    std::string witness;  // empty when passed
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    std::string failed_names() const {
        std::string out;
        for (const auto& c : checks)
            if (!c.passed) out += (out.empty() ? "" : ", ") + c.name;
        return out;
    }
};

/// Checks the well-posedness conditions: interval and delay geometry (A1),
/// continuity of f and the history by sampling (A2, A3), the declared
/// Lipschitz constant on random probe triples (A4), and the contraction
/// inequality 2 L_f (b - t0) < 1 (A5). Sampling is deterministic.
inline ConditionReport check_conditions(const DDEProblem& p, std::size_t probes = 200,
                                        unsigned seed = 0x5eed) {
    ConditionReport report;
    auto add = [&](std::string name, bool ok, std::string witness = "") {
        report.checks.push_back({std::move(name), ok, ok ? "" : std::move(witness)});
    };

    bool a1 = std::isfinite(p.t0) && std::isfinite(p.b) && p.t0 < p.b && p.tau > 0.0;
    add("A1", a1, "need t0 < b and tau > 0");

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> tdist(p.t0, p.b);
    std::uniform_real_distribution<double> udist(-10.0, 10.0);

    bool a2 = true;
    std::string w2;
    for (std::size_t i = 0; i < probes && a2; ++i) {
        double t = tdist(rng), u = udist(rng), v = udist(rng);
        if (!std::isfinite(p.rhs(t, u, v))) {
            a2 = false;
            w2 = "non-finite f at t=" + std::to_string(t);
        }
    }
    add("A2", a2, w2);

    bool a3 = true;
    std::string w3;
    for (std::size_t i = 0; i <= probes && a3; ++i) {
        double t = p.t0 - p.tau + (p.tau * static_cast<double>(i)) / static_cast<double>(probes);
        if (!std::isfinite(p.history(t))) {
            a3 = false;
            w3 = "non-finite history at t=" + std::to_string(t);
        }
    }
    add("A3", a3, w3);

    bool a4 = p.lipschitz > 0.0;
    std::string w4 = a4 ? "" : "L_f must be positive";
    for (std::size_t i = 0; i < probes && a4; ++i) {
        double t = tdist(rng);
        double u1 = udist(rng), v1 = udist(rng), u2 = udist(rng), v2 = udist(rng);
        double lhs = std::abs(p.rhs(t, u1, v1) - p.rhs(t, u2, v2));
        double rhs = p.lipschitz * (std::abs(u1 - u2) + std::abs(v1 - v2));
        if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
            a4 = false;
            w4 = "ratio " + std::to_string(lhs / (rhs > 0 ? rhs / p.lipschitz : 1.0)) +
                 " exceeds declared L_f at (t,u,v)=(" + std::to_string(t) + "," +
                 std::to_string(u1) + "," + std::to_string(v1) + ") vs (" + std::to_string(u2) +
                 "," + std::to_string(v2) + ")";
        }
    }
    add("A4", a4, w4);

    double contraction = 2.0 * p.lipschitz * (p.b - p.t0);
    add("A5", contraction < 1.0,
        "2 L_f (b - t0) = " + std::to_string(contraction) + " >= 1");
    return report;
}

/// Uniform grid over [t0 - tau, b] for the problem; step must divide both
/// tau and b - t0 so delayed reads land exactly on nodes.
inline GridFunction make_grid(const DDEProblem& p, double step,
                              std::function<double(double)> init) {
    auto multiple_of = [&](double len) {
        double ratio = len / step;
        return std::abs(ratio - std::round(ratio)) <= 1e-9 * (ratio + 1.0);
    };
    if (!(step > 0.0) || !multiple_of(p.tau) || !multiple_of(p.b - p.t0))
        throw structural_error("make_grid: step must divide tau and b - t0");
    auto n = static_cast<Eigen::Index>(std::llround((p.b - p.t0 + p.tau) / step));
    Eigen::VectorXd values(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i)
        values[i] = init(p.t0 - p.tau + static_cast<double>(i) * step);
    return GridFunction(p.t0 - p.tau, p.b, step, std::move(values));
}

/// The integral reformulation of the problem, discretized:
///   (Tx)(t) = psi(t)                                   on [t0 - tau, t0],
///   (Tx)(t) = psi(t0) + integral_{t0}^{t} f(s, x(s), x(s - tau)) ds
/// with the integral evaluated by the composite trapezoidal rule,
/// accumulated incrementally node to node. Delayed reads x(s - tau) are
/// exact node lookups thanks to the grid constraint.
inline GridFunction integral_operator_apply(const GridFunction& x, const DDEProblem& p) {
    const double h = x.step();
    if (std::abs(x.t_start() - (p.t0 - p.tau)) > 1e-12 ||
        std::abs(x.t_end() - p.b) > 1e-12)
        throw structural_error("integral_operator_apply: grid does not match the problem");
    auto delay_offset = static_cast<Eigen::Index>(std::llround(p.tau / h));
    auto history_end = delay_offset;  // node index of t0

    const Eigen::VectorXd& v = x.values();
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i <= history_end; ++i) out[i] = p.history(x.node(i));

    const double psi_t0 = p.history(p.t0);
    double integral = 0.0;
    double f_prev = p.rhs(p.t0, v[history_end], v[0]);
    out[history_end] = psi_t0;
    for (Eigen::Index i = history_end + 1; i < v.size(); ++i) {
        double s = x.node(i);
        double f_here = p.rhs(s, v[i], v[i - delay_offset]);
        if (!std::isfinite(f_here))
            throw numerical_error("integral_operator_apply: non-finite rhs",
                                  static_cast<std::size_t>(i));
        integral += h * 0.5 * (f_prev + f_here);
        out[i] = psi_t0 + integral;
        f_prev = f_here;
    }
    return x.with_values(std::move(out));
}

struct DDESolveResult {
    GridFunction solution;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||Tx - x||_inf at exit
};

/// Solves the problem by running the hybrid iteration with the integral
/// operator in the sup-norm grid space. The initial iterate extends
/// psi(t0) as a constant over [t0, b].
inline DDESolveResult solve_picard_s(const DDEProblem& p, double step,
                                     const ControlSequences& controls, const StopRule& stop) {
    stop.validate();
    if (!controls.divergent())
        throw config_error("solve_picard_s: divergence flag required on the controls");
    ConditionReport conditions = check_conditions(p);
    if (!conditions.all_passed())
        throw config_error("solve_picard_s: conditions failed: " + conditions.failed_names());

    const double psi_t0 = p.history(p.t0);
    GridFunction x = make_grid(p, step, [&](double t) {
        return t <= p.t0 ? p.history(t) : psi_t0;
    });

    ContractionMap<GridFunction> op{
        [&p](const GridFunction& g) { return integral_operator_apply(g, p); },
        2.0 * p.lipschitz * (p.b - p.t0),
        {},
    };

    IterationState<GridFunction> state{0, std::move(x), {}};
    for (std::size_t k = 0; k < stop.max_iters; ++k) {
        IterationState<GridFunction> next = picard_s_step(state, op, controls);
        double diff = sup_distance(next.x, state.x);
        state = std::move(next);
        if (diff <= stop.abs_tol) {
            double residual = sup_distance(integral_operator_apply(state.x, p), state.x);
            return DDESolveResult{std::move(state.x), state.n, residual};
        }
    }
    double residual = sup_distance(integral_operator_apply(state.x, p), state.x);
    throw numerical_error("solve_picard_s: no convergence within max_iters, residual " +
                              std::to_string(residual),
                          stop.max_iters);
}

/// ||x_{n+1} - x*|| <= ||x_0 - x*||
///     prod_{k=0}^{n} [1 - eta^1_k eta^2_k (1 - 2 L_f (b - t0))].
inline double dde_error_bound(std::size_t n, const DDEProblem& p,
                              const ControlSequences& controls, double initial_error) {
    double contraction = 2.0 * p.lipschitz * (p.b - p.t0);
    if (!(contraction < 1.0))
        throw domain_error("dde_error_bound: 2 L_f (b - t0) < 1 required");
    double bound = initial_error;
    for (std::size_t k = 0; k <= n; ++k)
        bound *= 1.0 - controls.eta1(k) * controls.eta2(k) * (1.0 - contraction);
    return bound;
}

/// CSV export: header "t,x", one row per node, 17 significant digits.
inline void write_csv(const GridFunction& g, std::ostream& os) {
    os << "t,x\n";
    char buf[80];
    for (Eigen::Index i = 0; i < g.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.node(i), g.values()[i]);
        os << buf;
    }
}

} // namespace fixiter
