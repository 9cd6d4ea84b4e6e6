#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "fixiter/decimal.hpp"
#include "fixiter/errors.hpp"
#include "fixiter/space.hpp"

namespace fixiter {

enum class SchemeId { Picard, Mann, Ishikawa, Noor, SP, S, CR, PicardS };

inline std::string_view scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Picard: return "Picard";
        case SchemeId::Mann: return "Mann";
        case SchemeId::Ishikawa: return "Ishikawa";
        case SchemeId::Noor: return "Noor";
        case SchemeId::SP: return "SP";
        case SchemeId::S: return "S";
        case SchemeId::CR: return "CR";
        case SchemeId::PicardS: return "PicardS";
    }
    return "?";
}

inline std::optional<SchemeId> parse_scheme(std::string_view name) {
    for (SchemeId id : {SchemeId::Picard, SchemeId::Mann, SchemeId::Ishikawa, SchemeId::Noor,
                        SchemeId::SP, SchemeId::S, SchemeId::CR, SchemeId::PicardS})
        if (name == scheme_name(id)) return id;
    return std::nullopt;
}

/// The weight sequences eta^0, eta^1, eta^2 in [0,1] driving every averaged
/// scheme. The divergence flag records the user's assertion that
/// sum_n eta^1_n eta^2_n diverges; it is set automatically for constant
/// sequences with eta^1 eta^2 > 0.
class ControlSequences {
public:
    using Generator = std::function<double(std::size_t)>;

    static ControlSequences constant(double e0, double e1, double e2) {
        ControlSequences c;
        c.check(e0); c.check(e1); c.check(e2);
        c.eta0_ = [e0](std::size_t) { return e0; };
        c.eta1_ = [e1](std::size_t) { return e1; };
        c.eta2_ = [e2](std::size_t) { return e2; };
        c.divergent_ = e1 * e2 > 0.0;
        return c;
    }

    static ControlSequences from_generators(Generator g0, Generator g1, Generator g2,
                                            bool divergent) {
        ControlSequences c;
        c.eta0_ = std::move(g0);
        c.eta1_ = std::move(g1);
        c.eta2_ = std::move(g2);
        c.divergent_ = divergent;
        return c;
    }

    double eta0(std::size_t n) const { return emit(eta0_, n); }
    double eta1(std::size_t n) const { return emit(eta1_, n); }
    double eta2(std::size_t n) const { return emit(eta2_, n); }
    bool divergent() const { return divergent_; }

private:
    ControlSequences() = default;
    static void check(double v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw domain_error("ControlSequences: value outside [0,1]");
    }
    static double emit(const Generator& g, std::size_t n) {
        double v = g(n);
        check(v);
        return v;
    }
    Generator eta0_, eta1_, eta2_;
    bool divergent_ = false;
};

/// A self-map T with contraction factor delta in (0,1):
/// ||Tx - Ty|| <= delta ||x - y||.
template <class P>
struct ContractionMap {
    std::function<P(const P&)> apply;
    double delta = 0.0;
    std::optional<P> fixed_point_hint;
};

/// Statistical check of the contraction inequality over probe pairs.
/// Returns false (and a witness pair index) on the first violation.
template <class P>
bool validate_contraction(const ContractionMap<P>& map,
                          std::span<const std::pair<P, P>> probes,
                          std::size_t* witness = nullptr, double slack = 1e-12) {
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& [x, y] = probes[i];
        double lhs = sup_distance(map.apply(x), map.apply(y));
        double rhs = map.delta * sup_distance(x, y);
        if (lhs > rhs + slack * (rhs + 1.0)) {
            if (witness) *witness = i;
            return false;
        }
    }
    return true;
}

/// Advisory estimate of delta as the max observed ratio ||Tx-Ty||/||x-y||.
template <class P>
double estimate_delta(const std::function<P(const P&)>& apply,
                      std::span<const std::pair<P, P>> probes) {
    double best = 0.0;
    for (const auto& [x, y] : probes) {
        double d = sup_distance(x, y);
        if (d == 0.0) continue;
        best = std::max(best, sup_distance(apply(x), apply(y)) / d);
    }
    return best;
}

/// Iterate plus the named intermediates of the step that produced it.
template <class P>
struct IterationState {
    std::size_t n = 0;
    P x;
    std::map<std::string, P> intermediates;
};

/// One step of the hybrid scheme
///   z = (1-eta2) x + eta2 Tx,  y = (1-eta1) Tx + eta1 Tz,  x' = Ty.
/// Tx is evaluated once and shared between the y and z lines, so a step
/// costs exactly three map applications.
template <class P>
IterationState<P> picard_s_step(const IterationState<P>& state, const ContractionMap<P>& map,
                                const ControlSequences& controls) {
    const std::size_t n = state.n;
    P tx = map.apply(state.x);
    P z = affine_combine(state.x, tx, controls.eta2(n));
    P y = affine_combine(tx, map.apply(z), controls.eta1(n));
    P next = map.apply(y);
    return IterationState<P>{n + 1, std::move(next),
                             {{"y", std::move(y)}, {"z", std::move(z)}}};
}

/// One step of the three-stage averaged scheme
///   w = (1-eta2) u + eta2 Tu,  v = (1-eta1) Tu + eta1 Tw,
///   u' = (1-eta0) v + eta0 Tv.
template <class P>
IterationState<P> cr_step(const IterationState<P>& state, const ContractionMap<P>& map,
                          const ControlSequences& controls) {
    const std::size_t n = state.n;
    P tu = map.apply(state.x);
    P w = affine_combine(state.x, tu, controls.eta2(n));
    P v = affine_combine(tu, map.apply(w), controls.eta1(n));
    P next = affine_combine(v, map.apply(v), controls.eta0(n));
    return IterationState<P>{n + 1, std::move(next),
                             {{"v", std::move(v)}, {"w", std::move(w)}}};
}

/// One step of a classical scheme (Picard, Mann, Ishikawa, Noor, SP, S).
/// SP's printed eta^1, eta^2, eta^3 are mapped positionally onto
/// (eta0, eta1, eta2). CR and PicardS route to their dedicated steps.
template <class P>
IterationState<P> classical_step(SchemeId id, const IterationState<P>& state,
                                 const ContractionMap<P>& map,
                                 const ControlSequences& controls) {
    const std::size_t n = state.n;
    const P& x = state.x;
    switch (id) {
        case SchemeId::Picard:
            return IterationState<P>{n + 1, map.apply(x), {}};
        case SchemeId::Mann:
            return IterationState<P>{n + 1, affine_combine(x, map.apply(x), controls.eta0(n)), {}};
        case SchemeId::Ishikawa: {
            P y = affine_combine(x, map.apply(x), controls.eta1(n));
            P next = affine_combine(x, map.apply(y), controls.eta0(n));
            return IterationState<P>{n + 1, std::move(next), {{"y", std::move(y)}}};
        }
        case SchemeId::Noor: {
            P z = affine_combine(x, map.apply(x), controls.eta2(n));
            P y = affine_combine(x, map.apply(z), controls.eta1(n));
            P next = affine_combine(x, map.apply(y), controls.eta0(n));
            return IterationState<P>{n + 1, std::move(next),
                                     {{"y", std::move(y)}, {"z", std::move(z)}}};
        }
        case SchemeId::SP: {
            P z = affine_combine(x, map.apply(x), controls.eta2(n));
            P y = affine_combine(z, map.apply(z), controls.eta1(n));
            P next = affine_combine(y, map.apply(y), controls.eta0(n));
            return IterationState<P>{n + 1, std::move(next),
                                     {{"y", std::move(y)}, {"z", std::move(z)}}};
        }
        case SchemeId::S: {
            P tx = map.apply(x);
            P y = affine_combine(x, tx, controls.eta1(n));
            P next = affine_combine(tx, map.apply(y), controls.eta0(n));
            return IterationState<P>{n + 1, std::move(next), {{"y", std::move(y)}}};
        }
        case SchemeId::CR:
        case SchemeId::PicardS:
            throw config_error("classical_step: use cr_step / picard_s_step");
    }
    throw config_error("classical_step: unknown scheme");
}

/// Dispatches any scheme id to its step function.
template <class P>
IterationState<P> scheme_step(SchemeId id, const IterationState<P>& state,
                              const ContractionMap<P>& map, const ControlSequences& controls) {
    switch (id) {
        case SchemeId::PicardS: return picard_s_step(state, map, controls);
        case SchemeId::CR: return cr_step(state, map, controls);
        default: return classical_step(id, state, map, controls);
    }
}

// --- Built-in example map -------------------------------------------------

/// T x = (3x + 18)^(1/3) on [0, inf): a contraction with
/// delta = 18^(-1/3) and fixed point 3.
inline ContractionMap<double> sahu_map() {
    return ContractionMap<double>{
        [](const double& x) { return std::cbrt(3.0 * x + 18.0); },
        std::pow(18.0, -1.0 / 3.0),
        3.0,
    };
}

/// Same map in 10-digit decimal arithmetic: the argument 3x+18 is rounded
/// to working precision, then the cube root is correctly rounded.
inline ContractionMap<Decimal> sahu_map_decimal() {
    return ContractionMap<Decimal>{
        [](const Decimal& x) { return cbrt(Decimal(3) * x + Decimal(18)); },
        std::pow(18.0, -1.0 / 3.0),
        Decimal(3),
    };
}

} // namespace fixiter
