#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fixiter {

/// Arithmetic expression over named variables, parsed by recursive descent.
///
/// Grammar: + - * / ^ (right-associative), unary minus, parentheses, the
/// functions cbrt, sqrt, exp, log, abs, and the constants pi and e.
class Expression {
public:
    struct Node;

    /// Parses `text`; identifiers must be listed in `variables` (or be a
    /// known function/constant). Throws parse_error with the position.
    static Expression parse(std::string_view text, std::span<const std::string> variables);

    /// Evaluates with values parallel to the variable list given at parse.
    double evaluate(std::span<const double> values) const;

    std::size_t variable_count() const { return n_vars_; }

private:
    std::shared_ptr<const Node> root_;
    std::size_t n_vars_ = 0;
};

} // namespace fixiter
