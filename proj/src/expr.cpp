#include "fixiter/expr.hpp"
#include "fixiter/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace fixiter {

namespace {

enum class Op { Add, Sub, Mul, Div, Pow, Neg, Cbrt, Sqrt, Exp, Log, Abs };

} // namespace

struct Expression::Node {
    enum class Kind { Constant, Variable, Unary, Binary } kind;
    double value = 0.0;       // Constant
    std::size_t index = 0;    // Variable
    Op op = Op::Add;          // Unary / Binary
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->value = v;
    return n;
}

NodePtr variable(std::size_t idx) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->index = idx;
    return n;
}

NodePtr unary(Op op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw parse_error("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::span<const std::string> vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+')) lhs = binary(Op::Add, lhs, term());
            else if (consume('-')) lhs = binary(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (consume('*')) lhs = binary(Op::Mul, lhs, factor());
            else if (consume('/')) lhs = binary(Op::Div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        if (consume('-')) return unary(Op::Neg, factor());
        NodePtr base = primary();
        if (consume('^')) return binary(Op::Pow, base, factor());  // right-assoc
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw parse_error("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (consume('(')) {
            NodePtr e = expr();
            if (!consume(')')) throw parse_error("expected ')'", pos_);
            return e;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw parse_error("bad number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return constant(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (name == vars_[i]) return variable(i);
        if (name == "pi") return constant(std::numbers::pi);
        if (name == "e") return constant(std::numbers::e);

        Op op;
        if (name == "cbrt") op = Op::Cbrt;
        else if (name == "sqrt") op = Op::Sqrt;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "abs") op = Op::Abs;
        else throw parse_error("unknown identifier '" + std::string(name) + "'", start);

        if (!consume('(')) throw parse_error("expected '(' after function name", pos_);
        NodePtr arg = expr();
        if (!consume(')')) throw parse_error("expected ')'", pos_);
        return unary(op, arg);
    }
};

double eval_node(const Node& n, std::span<const double> values) {
    switch (n.kind) {
        case Node::Kind::Constant: return n.value;
        case Node::Kind::Variable: return values[n.index];
        case Node::Kind::Unary: {
            double a = eval_node(*n.lhs, values);
            switch (n.op) {
                case Op::Neg: return -a;
                case Op::Cbrt: return std::cbrt(a);
                case Op::Sqrt: return std::sqrt(a);
                case Op::Exp: return std::exp(a);
                case Op::Log: return std::log(a);
                case Op::Abs: return std::abs(a);
                default: break;
            }
            break;
        }
        case Node::Kind::Binary: {
            double a = eval_node(*n.lhs, values);
            double b = eval_node(*n.rhs, values);
            switch (n.op) {
                case Op::Add: return a + b;
                case Op::Sub: return a - b;
                case Op::Mul: return a * b;
                case Op::Div: return a / b;
                case Op::Pow: return std::pow(a, b);
                default: break;
            }
            break;
        }
    }
    throw domain_error("expression: malformed node");
}

} // namespace

Expression Expression::parse(std::string_view text, std::span<const std::string> variables) {
    Expression e;
    e.root_ = Parser(text, variables).run();
    e.n_vars_ = variables.size();
    return e;
}

double Expression::evaluate(std::span<const double> values) const {
    if (values.size() != n_vars_)
        throw structural_error("Expression::evaluate: wrong number of values");
    return eval_node(*root_, values);
}

} // namespace fixiter
