#pragma once

#include <memory>
#include <set>

#include "beltrami/common.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Minimal arithmetic expression language over the variables {x, y, r, theta}
// with functions {sin, cos, exp, log, sqrt, abs}, the constant pi, and
// + - * / with parentheses. Expressions carry closed-form partial derivatives
// (d/dx, d/dy via the chain rule through r and theta), so coefficients built
// from expressions get exact Wirtinger derivatives.
// ---------------------------------------------------------------------------

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
  public:
    enum class Kind { number, var_x, var_y, var_r, var_theta, add, sub, mul, div, neg, call };
    enum class Fn { sin, cos, exp, log, sqrt, abs };

    Kind kind;
    double value = 0.0;  // number
    Fn fn = Fn::sin;     // call
    ExprPtr a, b;

    static ExprPtr number(double v) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::number;
        e->value = v;
        return e;
    }
    static ExprPtr variable(Kind k) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        return e;
    }
    static ExprPtr binary(Kind k, ExprPtr l, ExprPtr r) {
        // light constant folding keeps symbolic derivatives small
        if (l->kind == Kind::number && r->kind == Kind::number) {
            switch (k) {
                case Kind::add: return number(l->value + r->value);
                case Kind::sub: return number(l->value - r->value);
                case Kind::mul: return number(l->value * r->value);
                case Kind::div: return number(l->value / r->value);
                default: break;
            }
        }
        if (k == Kind::mul) {
            if (is_zero(l) || is_zero(r)) return number(0.0);
            if (is_one(l)) return r;
            if (is_one(r)) return l;
        }
        if (k == Kind::add) {
            if (is_zero(l)) return r;
            if (is_zero(r)) return l;
        }
        if (k == Kind::sub && is_zero(r)) return l;
        if (k == Kind::div && is_one(r)) return l;
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(l);
        e->b = std::move(r);
        return e;
    }
    static ExprPtr negate(ExprPtr x) {
        if (x->kind == Kind::number) return number(-x->value);
        auto e = std::make_shared<Expr>();
        e->kind = Kind::neg;
        e->a = std::move(x);
        return e;
    }
    static ExprPtr call(Fn f, ExprPtr arg) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::call;
        e->fn = f;
        e->a = std::move(arg);
        return e;
    }

    static bool is_zero(const ExprPtr& e) { return e->kind == Kind::number && e->value == 0.0; }
    static bool is_one(const ExprPtr& e) { return e->kind == Kind::number && e->value == 1.0; }

    double eval(double x, double y) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::var_x: return x;
            case Kind::var_y: return y;
            case Kind::var_r: return std::hypot(x, y);
            case Kind::var_theta: {
                double t = std::atan2(y, x);
                return t < 0 ? t + 2.0 * pi : t;
            }
            case Kind::add: return a->eval(x, y) + b->eval(x, y);
            case Kind::sub: return a->eval(x, y) - b->eval(x, y);
            case Kind::mul: return a->eval(x, y) * b->eval(x, y);
            case Kind::div: return a->eval(x, y) / b->eval(x, y);
            case Kind::neg: return -a->eval(x, y);
            case Kind::call: {
                double v = a->eval(x, y);
                switch (fn) {
                    case Fn::sin: return std::sin(v);
                    case Fn::cos: return std::cos(v);
                    case Fn::exp: return std::exp(v);
                    case Fn::log: return std::log(v);
                    case Fn::sqrt: return std::sqrt(v);
                    case Fn::abs: return std::abs(v);
                }
            }
        }
        return 0.0;
    }

    /// Symbolic partial derivative with respect to x or y; r and theta expand
    /// through dr = (x/r, y/r), dtheta = (-y/r^2, x/r^2).
    ExprPtr diff(bool wrt_x) const {
        using K = Kind;
        switch (kind) {
            case K::number: return number(0.0);
            case K::var_x: return number(wrt_x ? 1.0 : 0.0);
            case K::var_y: return number(wrt_x ? 0.0 : 1.0);
            case K::var_r: {
                ExprPtr r = variable(K::var_r);
                ExprPtr num = wrt_x ? variable(K::var_x) : variable(K::var_y);
                return binary(K::div, num, r);
            }
            case K::var_theta: {
                ExprPtr r = variable(K::var_r);
                ExprPtr r2 = binary(K::mul, r, r);
                ExprPtr num = wrt_x ? negate(variable(K::var_y)) : variable(K::var_x);
                return binary(K::div, num, r2);
            }
            case K::add: return binary(K::add, a->diff(wrt_x), b->diff(wrt_x));
            case K::sub: return binary(K::sub, a->diff(wrt_x), b->diff(wrt_x));
            case K::mul:
                return binary(K::add, binary(K::mul, a->diff(wrt_x), b),
                              binary(K::mul, a, b->diff(wrt_x)));
            case K::div:
                return binary(
                    K::div,
                    binary(K::sub, binary(K::mul, a->diff(wrt_x), b),
                           binary(K::mul, a, b->diff(wrt_x))),
                    binary(K::mul, b, b));
            case K::neg: return negate(a->diff(wrt_x));
            case K::call: {
                ExprPtr inner = a->diff(wrt_x);
                ExprPtr outer;
                switch (fn) {
                    case Fn::sin: outer = call(Fn::cos, a); break;
                    case Fn::cos: outer = negate(call(Fn::sin, a)); break;
                    case Fn::exp: outer = call(Fn::exp, a); break;
                    case Fn::log: outer = binary(K::div, number(1.0), a); break;
                    case Fn::sqrt:
                        outer = binary(K::div, number(0.5), call(Fn::sqrt, a));
                        break;
                    case Fn::abs:
                        // sign(a) = a/|a|; not differentiable at 0
                        outer = binary(K::div, a, call(Fn::abs, a));
                        break;
                }
                return binary(K::mul, outer, inner);
            }
        }
        return number(0.0);
    }

    void collect_variables(std::set<std::string>& out) const {
        switch (kind) {
            case Kind::var_x: out.insert("x"); break;
            case Kind::var_y: out.insert("y"); break;
            case Kind::var_r: out.insert("r"); break;
            case Kind::var_theta: out.insert("theta"); break;
            default: break;
        }
        if (a) a->collect_variables(out);
        if (b) b->collect_variables(out);
    }
};

namespace expr_detail {

class Parser {
  public:
    explicit Parser(std::string src) : s_(std::move(src)) {}

    ExprPtr parse() {
        ExprPtr e = expression();
        skip_ws();
        if (pos_ != s_.size())
            throw ConfigError("expression: trailing input at '" + s_.substr(pos_) + "'");
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expression() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+'))
                e = Expr::binary(Expr::Kind::add, e, term());
            else if (eat('-'))
                e = Expr::binary(Expr::Kind::sub, e, term());
            else
                return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (eat('*'))
                e = Expr::binary(Expr::Kind::mul, e, factor());
            else if (eat('/'))
                e = Expr::binary(Expr::Kind::div, e, factor());
            else
                return e;
        }
    }
    ExprPtr factor() {
        if (eat('-')) return Expr::negate(factor());
        if (eat('+')) return factor();
        return primary();
    }
    ExprPtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ConfigError("expression: unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return Expr::number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return Expr::variable(Expr::Kind::var_x);
            if (name == "y") return Expr::variable(Expr::Kind::var_y);
            if (name == "r") return Expr::variable(Expr::Kind::var_r);
            if (name == "theta") return Expr::variable(Expr::Kind::var_theta);
            if (name == "pi") return Expr::number(pi);
            Expr::Fn fn;
            if (name == "sin") fn = Expr::Fn::sin;
            else if (name == "cos") fn = Expr::Fn::cos;
            else if (name == "exp") fn = Expr::Fn::exp;
            else if (name == "log") fn = Expr::Fn::log;
            else if (name == "sqrt") fn = Expr::Fn::sqrt;
            else if (name == "abs") fn = Expr::Fn::abs;
            else
                throw ConfigError("expression: unknown identifier '" + name + "'");
            if (!eat('(')) throw ConfigError("expression: expected '(' after '" + name + "'");
            ExprPtr arg = expression();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return Expr::call(fn, arg);
        }
        if (eat('(')) {
            ExprPtr e = expression();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return e;
        }
        throw ConfigError(std::string("expression: unexpected character '") + c + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace expr_detail

inline ExprPtr parse_expression(const std::string& src) {
    return expr_detail::Parser(src).parse();
}

/// Real callable plus its exact Wirtinger derivative dbar = (d_x + i d_y)/2.
struct SymbolicField {
    ExprPtr f, fx, fy;

    explicit SymbolicField(const std::string& src) : f(parse_expression(src)) {
        fx = f->diff(true);
        fy = f->diff(false);
    }
    double operator()(double x, double y) const { return f->eval(x, y); }
    cd dbar(double x, double y) const {
        return 0.5 * cd(fx->eval(x, y), fy->eval(x, y));
    }
    std::set<std::string> variables() const {
        std::set<std::string> v;
        f->collect_variables(v);
        return v;
    }
};

}  // namespace beltrami
