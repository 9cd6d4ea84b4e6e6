#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>

#include "fixiter/decimal.hpp"
#include "fixiter/errors.hpp"

namespace fixiter {

/// Nonnegative result of a norm or distance evaluation.
struct NormValue {
    double value = 0.0;
    NormValue() = default;
    explicit NormValue(double v) : value(v) {
        if (!(v >= 0.0)) throw domain_error("NormValue must be nonnegative");
    }
    operator double() const { return value; }
};

/// Piecewise-linear function on a uniform grid over [t_start, t_end].
///
/// Immutable value type; node i sits at t_start + i*step. Construction
/// enforces that the node count matches the interval, so two grid
/// functions with equal geometry are comparable node by node.
class GridFunction {
public:
    GridFunction(double t_start, double t_end, double step, Eigen::VectorXd values)
        : t_start_(t_start), t_end_(t_end), step_(step), values_(std::move(values)) {
        if (!(step > 0.0) || !(t_end > t_start))
            throw domain_error("GridFunction: need t_end > t_start and step > 0");
        double ratio = (t_end - t_start) / step;
        auto n = static_cast<Eigen::Index>(std::llround(ratio));
        if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * (std::abs(ratio) + 1.0))
            throw structural_error("GridFunction: step does not divide the interval");
        if (values_.size() != n + 1)
            throw structural_error("GridFunction: node count mismatch");
    }

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double step() const { return step_; }
    Eigen::Index node_count() const { return values_.size(); }
    double node(Eigen::Index i) const { return t_start_ + static_cast<double>(i) * step_; }
    const Eigen::VectorXd& values() const { return values_; }

    bool same_geometry(const GridFunction& other) const {
        return t_start_ == other.t_start_ && t_end_ == other.t_end_ && step_ == other.step_;
    }

    GridFunction with_values(Eigen::VectorXd v) const {
        return GridFunction(t_start_, t_end_, step_, std::move(v));
    }

private:
    double t_start_, t_end_, step_;
    Eigen::VectorXd values_;
};

/// Element of the ambient space: a real scalar, a fixed-dimension real
/// vector, or a grid function. All arithmetic stays within one variant.
class Point {
public:
    Point(double v) : rep_(v) {}
    Point(Eigen::VectorXd v) : rep_(std::move(v)) {}
    Point(GridFunction g) : rep_(std::move(g)) {}

    bool is_scalar() const { return std::holds_alternative<double>(rep_); }
    bool is_vector() const { return std::holds_alternative<Eigen::VectorXd>(rep_); }
    bool is_grid() const { return std::holds_alternative<GridFunction>(rep_); }

    double scalar() const { return std::get<double>(rep_); }
    const Eigen::VectorXd& vector() const { return std::get<Eigen::VectorXd>(rep_); }
    const GridFunction& grid() const { return std::get<GridFunction>(rep_); }

private:
    std::variant<double, Eigen::VectorXd, GridFunction> rep_;
};

inline void require_weight(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw domain_error("affine_combine: weight outside [0,1]");
}

/// (1-w)*a + w*b, evaluated left to right in this exact order.
inline double affine_combine(double a, double b, double w) {
    require_weight(w);
    return (1.0 - w) * a + w * b;
}

inline Eigen::VectorXd affine_combine(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                      double w) {
    require_weight(w);
    if (a.size() != b.size())
        throw structural_error("affine_combine: dimension mismatch");
    return (1.0 - w) * a + w * b;
}

inline Decimal affine_combine(const Decimal& a, const Decimal& b, double w) {
    require_weight(w);
    Decimal dw = Decimal::from_double(w);
    return (Decimal(1) - dw) * a + dw * b;
}

inline GridFunction affine_combine(const GridFunction& a, const GridFunction& b, double w) {
    if (!a.same_geometry(b))
        throw structural_error("affine_combine: grid geometry mismatch");
    return a.with_values(affine_combine(a.values(), b.values(), w));
}

inline Point affine_combine(const Point& a, const Point& b, double w) {
    if (a.is_scalar() && b.is_scalar())
        return Point(affine_combine(a.scalar(), b.scalar(), w));
    if (a.is_vector() && b.is_vector())
        return Point(affine_combine(a.vector(), b.vector(), w));
    if (a.is_grid() && b.is_grid())
        return Point(affine_combine(a.grid(), b.grid(), w));
    throw structural_error("affine_combine: mixed point variants");
}

/// Chebyshev (sup) distance between two points of the same variant.
inline NormValue sup_distance(double a, double b) {
    return NormValue(std::abs(a - b));
}

inline NormValue sup_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw structural_error("sup_distance: dimension mismatch");
    if (a.size() == 0) return NormValue(0.0);
    return NormValue((a - b).cwiseAbs().maxCoeff());
}

inline NormValue sup_distance(const Decimal& a, const Decimal& b) {
    return NormValue(abs(a - b).to_double());
}

inline NormValue sup_distance(const GridFunction& a, const GridFunction& b) {
    if (!a.same_geometry(b))
        throw structural_error("sup_distance: grid geometry mismatch");
    return sup_distance(a.values(), b.values());
}

inline NormValue sup_distance(const Point& a, const Point& b) {
    if (a.is_scalar() && b.is_scalar()) return sup_distance(a.scalar(), b.scalar());
    if (a.is_vector() && b.is_vector()) return sup_distance(a.vector(), b.vector());
    if (a.is_grid() && b.is_grid()) return sup_distance(a.grid(), b.grid());
    throw structural_error("sup_distance: mixed point variants");
}

} // namespace fixiter
