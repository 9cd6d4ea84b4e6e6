#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "fixiter/errors.hpp"
#include "fixiter/schemes.hpp"
#include "fixiter/space.hpp"

namespace fixiter {

/// Stopping criteria for a trajectory run. Defaults are generous for the
/// examples in this library: 100 iterations, step tolerance 1e-12.
struct StopRule {
    std::size_t max_iters = 100;
    double abs_tol = 1e-12;                 // on ||x_{n+1} - x_n||
    std::optional<double> target_tol = {};  // on ||x_n - x*|| when x* is known

    void validate() const {
        if (max_iters < 1) throw config_error("StopRule: max_iters must be >= 1");
        if (abs_tol < 0.0) throw config_error("StopRule: abs_tol must be >= 0");
        if (target_tol && *target_tol < 0.0)
            throw config_error("StopRule: target_tol must be >= 0");
    }
};

/// A completed run: all iterates, per-step errors to the fixed point when
/// it is known, and the exact number of map applications.
template <class P>
struct Trajectory {
    SchemeId scheme = SchemeId::Picard;
    std::vector<P> iterates;       // x_0 .. x_N
    std::vector<double> errors;    // ||x_n - x*||, empty when x* unknown
    std::size_t map_eval_count = 0;

    std::size_t final_index() const { return iterates.size() - 1; }
    const P& final_iterate() const { return iterates.back(); }
};

inline bool point_is_finite(double x) { return std::isfinite(x); }
inline bool point_is_finite(const Decimal&) { return true; }
inline bool point_is_finite(const Eigen::VectorXd& v) { return v.allFinite(); }
inline bool point_is_finite(const GridFunction& g) { return g.values().allFinite(); }
inline bool point_is_finite(const Point& p) {
    if (p.is_scalar()) return point_is_finite(p.scalar());
    if (p.is_vector()) return point_is_finite(p.vector());
    return point_is_finite(p.grid());
}

/// Runs the named scheme from x0 until a stop criterion fires.
///
/// PicardS requires the controls' divergence flag (the hypothesis
/// sum eta^1 eta^2 = inf of its convergence theorem).
template <class P>
Trajectory<P> iterate(SchemeId id, const ContractionMap<P>& map, const P& x0,
                      const ControlSequences& controls, const StopRule& stop) {
    stop.validate();
    if (id == SchemeId::PicardS && !controls.divergent())
        throw config_error("iterate: PicardS requires the divergence flag on the controls");

    Trajectory<P> traj;
    traj.scheme = id;
    ContractionMap<P> counted = map;
    counted.apply = [&traj, &map](const P& p) {
        ++traj.map_eval_count;
        return map.apply(p);
    };

    auto record = [&](const P& x) {
        if (!point_is_finite(x))
            throw numerical_error("iterate: non-finite iterate", traj.iterates.size());
        if (map.fixed_point_hint)
            traj.errors.push_back(sup_distance(x, *map.fixed_point_hint));
        traj.iterates.push_back(x);
    };

    IterationState<P> state{0, x0, {}};
    record(state.x);
    if (map.fixed_point_hint && stop.target_tol &&
        traj.errors.back() <= *stop.target_tol)
        return traj;

    while (state.n < stop.max_iters) {
        IterationState<P> next = scheme_step(id, state, counted, controls);
        record(next.x);
        double step_diff = sup_distance(next.x, state.x);
        state = std::move(next);
        if (stop.target_tol && map.fixed_point_hint &&
            traj.errors.back() <= *stop.target_tol)
            break;
        if (step_diff <= stop.abs_tol) break;
    }
    return traj;
}

// --- Theoretical error bounds --------------------------------------------

inline void require_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw domain_error("contraction factor must lie in (0,1)");
}

/// ||x_{n+1} - x*|| <= ||x_0 - x*|| delta^{2(n+1)}
///                     prod_{k=0}^{n} [1 - eta^1_k eta^2_k (1-delta)].
inline double picard_s_error_bound(std::size_t n, double delta,
                                   const ControlSequences& controls, double initial_error) {
    require_delta(delta);
    double bound = initial_error * std::pow(delta, 2.0 * (static_cast<double>(n) + 1.0));
    for (std::size_t k = 0; k <= n; ++k)
        bound *= 1.0 - controls.eta1(k) * controls.eta2(k) * (1.0 - delta);
    return bound;
}

/// ||u_{n+1} - x*|| <= ||u_0 - x*||
///     prod_{k=0}^{n} delta [1 - eta^0_k (1-delta)][1 - eta^1_k eta^2_k (1-delta)].
inline double cr_error_bound(std::size_t n, double delta, const ControlSequences& controls,
                             double initial_error) {
    require_delta(delta);
    double bound = initial_error;
    for (std::size_t k = 0; k <= n; ++k)
        bound *= delta * (1.0 - controls.eta0(k) * (1.0 - delta)) *
                 (1.0 - controls.eta1(k) * controls.eta2(k) * (1.0 - delta));
    return bound;
}

/// Ratio of the hybrid scheme's bound sequence to the three-stage averaged
/// scheme's: [delta / (1 - eta0 (1-delta))]^{n+1}. The base is < 1, so the
/// ratio decays geometrically.
inline double theta_ratio(std::size_t n, double delta, double eta0_lower) {
    require_delta(delta);
    if (!(eta0_lower > 0.0 && eta0_lower < 1.0))
        throw domain_error("theta_ratio: eta0 lower bound must lie in (0,1)");
    double base = delta / (1.0 - eta0_lower * (1.0 - delta));
    return std::pow(base, static_cast<double>(n) + 1.0);
}

// --- Rate comparison ------------------------------------------------------

enum class RateClass { FasterA, FasterB, SameRate, Inconclusive };

inline std::string_view rate_class_name(RateClass c) {
    switch (c) {
        case RateClass::FasterA: return "FasterA";
        case RateClass::FasterB: return "FasterB";
        case RateClass::SameRate: return "SameRate";
        case RateClass::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// Finite-sample thresholds standing in for the true limit of the error
/// ratio. Exposed because they are a judgement call, not theory.
struct RateThresholds {
    double faster_a = 0.1;   // limit estimate below this: A faster
    double faster_b = 10.0;  // above this: B faster
    double same_lo = 0.5;    // stable tail inside [same_lo, same_hi]: same rate
    double same_hi = 2.0;
};

struct RateVerdict {
    double limit_estimate = 0.0;  // +inf when B's errors vanish first
    RateClass classification = RateClass::Inconclusive;
    std::size_t tail_window = 0;
    std::vector<double> tail_ratios;  // the ratios that entered the estimate
};

/// Estimates lim ||a_n - p|| / ||b_n - p|| over the last `tail_window`
/// common indices (geometric mean). Indices where an error has underflowed
/// to zero are excluded; if one side reaches zero while the other has not,
/// that side wins outright.
template <class P>
RateVerdict compare_rates(const Trajectory<P>& traj_a, const Trajectory<P>& traj_b,
                          const P& fixed_point, std::size_t tail_window,
                          const RateThresholds& th = {}) {
    std::size_t common = std::min(traj_a.iterates.size(), traj_b.iterates.size());
    if (tail_window == 0 || common < tail_window)
        throw config_error("compare_rates: trajectories shorter than tail window");

    RateVerdict v;
    v.tail_window = tail_window;
    double log_sum = 0.0;
    std::size_t used = 0, both_zero = 0;
    int zero_side = 0;  // -1: a vanished first, +1: b vanished first
    for (std::size_t i = common - tail_window; i < common; ++i) {
        double ea = sup_distance(traj_a.iterates[i], fixed_point);
        double eb = sup_distance(traj_b.iterates[i], fixed_point);
        if (ea == 0.0 && eb == 0.0) { ++both_zero; continue; }
        if (ea == 0.0) { if (zero_side == 0) zero_side = -1; continue; }
        if (eb == 0.0) { if (zero_side == 0) zero_side = +1; continue; }
        double r = ea / eb;
        v.tail_ratios.push_back(r);
        log_sum += std::log(r);
        ++used;
    }

    if (used == 0) {
        if (zero_side < 0) {
            v.limit_estimate = 0.0;
            v.classification = RateClass::FasterA;
        } else if (zero_side > 0) {
            v.limit_estimate = std::numeric_limits<double>::infinity();
            v.classification = RateClass::FasterB;
        } else {
            v.limit_estimate = 1.0;
            v.classification = RateClass::Inconclusive;  // all errors identically zero
        }
        return v;
    }

    v.limit_estimate = std::exp(log_sum / static_cast<double>(used));
    if (zero_side < 0 || v.limit_estimate < th.faster_a) {
        v.classification = RateClass::FasterA;
        if (zero_side < 0) v.limit_estimate = std::min(v.limit_estimate, th.faster_a);
    } else if (zero_side > 0 || v.limit_estimate > th.faster_b) {
        v.classification = RateClass::FasterB;
    } else {
        bool stable = true;
        for (double r : v.tail_ratios)
            if (!(r >= th.same_lo && r <= th.same_hi)) stable = false;
        v.classification = (stable && v.limit_estimate >= th.same_lo &&
                            v.limit_estimate <= th.same_hi)
                               ? RateClass::SameRate
                               : RateClass::Inconclusive;
    }
    return v;
}

} // namespace fixiter
