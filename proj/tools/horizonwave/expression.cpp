#include "expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "horizonwave/errors.hpp"

namespace horizonwave::cli {

struct Expression::Node {
    enum class Kind { Number, Coordinate, Add, Sub, Mul, Div, Pow, Neg, Call } kind;
    double value = 0.0;
    int coordinate = 0;
    double (*fn)(double) = nullptr;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        auto e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("expression \"" + s_ + "\" at " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        auto lhs = product();
        while (true) {
            if (eat('+')) lhs = make(Kind::Add, {lhs, product()});
            else if (eat('-')) lhs = make(Kind::Sub, {lhs, product()});
            else return lhs;
        }
    }

    NodePtr product() {
        auto lhs = unary();
        while (true) {
            if (eat('*')) lhs = make(Kind::Mul, {lhs, unary()});
            else if (eat('/')) lhs = make(Kind::Div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (eat('^')) return make(Kind::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            auto e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        double v = 0.0;
        const auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("bad number");
        pos_ = static_cast<std::size_t>(p - s_.data());
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Number;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        auto n = std::make_shared<Expression::Node>();
        if (name == "pi") {
            n->kind = Kind::Number;
            n->value = std::numbers::pi;
            return n;
        }
        if (name == "x" || name == "y" || name == "z") {
            n->kind = Kind::Coordinate;
            n->coordinate = name == "x" ? 0 : name == "y" ? 1 : 2;
            return n;
        }
        if (name.size() > 1 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
            n->kind = Kind::Coordinate;
            n->coordinate = std::stoi(name.substr(1));
            return n;
        }
        double (*fn)(double) = nullptr;
        if (name == "cos") fn = [](double a) { return std::cos(a); };
        else if (name == "sin") fn = [](double a) { return std::sin(a); };
        else if (name == "exp") fn = [](double a) { return std::exp(a); };
        else if (name == "sqrt") fn = [](double a) { return std::sqrt(a); };
        else if (name == "log") fn = [](double a) { return std::log(a); };
        else if (name == "J0") fn = [](double a) { return std::cyl_bessel_j(0.0, a); };
        else if (name == "J1") fn = [](double a) { return std::cyl_bessel_j(1.0, a); };
        else fail("unknown identifier '" + name + "'");
        if (!eat('(')) fail("expected '(' after " + name);
        n->kind = Kind::Call;
        n->fn = fn;
        n->args = {sum()};
        if (!eat(')')) fail("expected ')'");
        return n;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, std::span<const double> x) {
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Coordinate: return x[static_cast<std::size_t>(n.coordinate)];
        case Kind::Add: return eval(*n.args[0], x) + eval(*n.args[1], x);
        case Kind::Sub: return eval(*n.args[0], x) - eval(*n.args[1], x);
        case Kind::Mul: return eval(*n.args[0], x) * eval(*n.args[1], x);
        case Kind::Div: return eval(*n.args[0], x) / eval(*n.args[1], x);
        case Kind::Pow: return std::pow(eval(*n.args[0], x), eval(*n.args[1], x));
        case Kind::Neg: return -eval(*n.args[0], x);
        case Kind::Call: return n.fn(eval(*n.args[0], x));
    }
    return 0.0;
}

int max_coord(const Expression::Node& n) {
    int m = n.kind == Kind::Coordinate ? n.coordinate : -1;
    for (const auto& a : n.args) m = std::max(m, max_coord(*a));
    return m;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

double Expression::evaluate(std::span<const double> x) const { return eval(*root_, x); }

int Expression::max_coordinate() const { return max_coord(*root_); }

Field field_from_expression(const SpatialTorus& torus, const std::string& text) {
    const auto e = Expression::parse(text);
    if (e.max_coordinate() >= torus.dims()) {
        throw ValidationError("expression \"" + text + "\" uses coordinate " + std::to_string(e.max_coordinate()) +
                              " on a " + std::to_string(torus.dims()) + "-torus");
    }
    Field f = Field::from_function(torus, [&](std::span<const double> x) { return e.evaluate(x); });
    for (const auto& c : f.data()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("expression \"" + text + "\" is not finite on the grid");
        }
    }
    return f;
}

double constant_expression(const std::string& text) {
    const auto e = Expression::parse(text);
    if (e.max_coordinate() >= 0) throw ValidationError("expression \"" + text + "\" must not depend on x");
    return e.evaluate({});
}

}  // namespace horizonwave::cli
