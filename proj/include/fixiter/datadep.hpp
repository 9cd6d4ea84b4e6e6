#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "fixiter/convergence.hpp"
#include "fixiter/errors.hpp"
#include "fixiter/schemes.hpp"

namespace fixiter {

/// A perturbed operator T~ that stays within epsilon of T everywhere:
/// ||Tx - T~x|| <= epsilon.
template <class P>
struct ApproximateOperator {
    ContractionMap<P> base;
    std::function<P(const P&)> perturbed;
    double epsilon = 0.0;
};

/// Builds an ApproximateOperator after statistically checking the
/// epsilon-closeness contract on the given probe points. A violation
/// aborts construction with the witness index.
template <class P>
ApproximateOperator<P> make_approximate_operator(ContractionMap<P> base,
                                                 std::function<P(const P&)> perturbed,
                                                 double epsilon, std::span<const P> probes,
                                                 double slack = 1e-12) {
    if (!(epsilon > 0.0))
        throw domain_error("make_approximate_operator: epsilon must be positive");
    for (std::size_t i = 0; i < probes.size(); ++i) {
        double gap = sup_distance(base.apply(probes[i]), perturbed(probes[i]));
        if (gap > epsilon + slack)
            throw domain_error("make_approximate_operator: probe " + std::to_string(i) +
                               " violates the epsilon-closeness contract");
    }
    return ApproximateOperator<P>{std::move(base), std::move(perturbed), epsilon};
}

/// One step of the hybrid recursion run entirely under the perturbed
/// operator T~. Requires eta^1_n eta^2_n >= 1/2 (hypothesis (i) of the
/// data-dependence theorem).
template <class P>
IterationState<P> perturbed_picard_s_step(const IterationState<P>& state,
                                          const ApproximateOperator<P>& op,
                                          const ControlSequences& controls) {
    const std::size_t n = state.n;
    if (controls.eta1(n) * controls.eta2(n) < 0.5)
        throw hypothesis_violation(
            "perturbed_picard_s_step: hypothesis (i) requires eta1*eta2 >= 1/2 at n=" +
            std::to_string(n));
    ContractionMap<P> tilde{op.perturbed, op.base.delta, {}};
    return picard_s_step(state, tilde, controls);
}

/// The fixed-point drift bound 5 epsilon / (1 - delta).
inline double data_dependence_bound(double epsilon, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw domain_error("data_dependence_bound: delta must lie in (0,1)");
    if (epsilon < 0.0)
        throw domain_error("data_dependence_bound: epsilon must be nonnegative");
    return 5.0 * epsilon / (1.0 - delta);
}

template <class P>
struct DataDependenceReport {
    double empirical_gap = 0.0;
    double bound = 0.0;
    bool satisfied = false;
    P fixed_point;            // converged under T
    P perturbed_fixed_point;  // converged under T~
};

/// Runs the hybrid scheme under T and the tilde recursion under T~ from a
/// common x0 to convergence, and checks ||x* - x~*|| against the bound.
/// The perturbed fixed point is obtained from the tilde recursion itself,
/// matching the theorem's hypothesis on the perturbed sequence.
template <class P>
DataDependenceReport<P> verify_data_dependence(const ApproximateOperator<P>& op, const P& x0,
                                               const ControlSequences& controls,
                                               const StopRule& stop,
                                               double convergence_slack = 1e-9) {
    stop.validate();
    if (!controls.divergent())
        throw config_error("verify_data_dependence: divergence flag required (hypothesis (ii))");

    auto run = [&](const ContractionMap<P>& map, bool check_hypothesis) {
        IterationState<P> state{0, x0, {}};
        for (std::size_t k = 0; k < stop.max_iters; ++k) {
            IterationState<P> next = check_hypothesis
                                         ? perturbed_picard_s_step(state, op, controls)
                                         : picard_s_step(state, map, controls);
            double diff = sup_distance(next.x, state.x);
            state = std::move(next);
            if (!point_is_finite(state.x))
                throw numerical_error("verify_data_dependence: non-finite iterate", state.n);
            if (diff <= stop.abs_tol) return state.x;
        }
        throw numerical_error("verify_data_dependence: no convergence within max_iters",
                              stop.max_iters);
    };

    // The base run must satisfy hypothesis (i) as well; checking it through
    // the perturbed step would hide violations, so check explicitly here.
    if (controls.eta1(0) * controls.eta2(0) < 0.5)
        throw hypothesis_violation("verify_data_dependence: eta1*eta2 >= 1/2 required");

    DataDependenceReport<P> report{0.0, data_dependence_bound(op.epsilon, op.base.delta),
                                   false, run(op.base, false), x0};
    report.perturbed_fixed_point = run(op.base, true);
    report.empirical_gap = sup_distance(report.fixed_point, report.perturbed_fixed_point);
    report.satisfied = report.empirical_gap <= report.bound + convergence_slack;
    return report;
}

} // namespace fixiter
