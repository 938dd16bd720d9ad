#include "rnm/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "rnm/errors.hpp"

namespace rnm::expr {

namespace {

struct FunctionInfo {
    const char* name;
    Op op;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"abs", Op::Abs, 1}, {"sqrt", Op::Sqrt, 1}, {"sin", Op::Sin, 1}, {"cos", Op::Cos, 1},
    {"exp", Op::Exp, 1}, {"min", Op::Min, 2},   {"max", Op::Max, 2},
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Node parse_all() {
        Node n = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Node expression() {
        Node lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Node{Op::Add, 0.0, {}, {std::move(lhs), term()}};
            } else if (accept('-')) {
                lhs = Node{Op::Sub, 0.0, {}, {std::move(lhs), term()}};
            } else {
                return lhs;
            }
        }
    }

    Node term() {
        Node lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Node{Op::Mul, 0.0, {}, {std::move(lhs), unary()}};
            } else if (accept('/')) {
                lhs = Node{Op::Div, 0.0, {}, {std::move(lhs), unary()}};
            } else {
                return lhs;
            }
        }
    }

    Node unary() {
        if (accept('-')) return Node{Op::Neg, 0.0, {}, {unary()}};
        return power();
    }

    Node power() {
        Node base = primary();
        if (accept('^')) return Node{Op::Pow, 0.0, {}, {std::move(base), unary()}};
        return base;
    }

    Node primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Node n = expression();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Node number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Node{Op::Number, v, {}, {}};
    }

    Node identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const FunctionInfo* fn = nullptr;
            for (const auto& f : kFunctions)
                if (name == f.name) fn = &f;
            if (fn == nullptr) throw ExprError("unknown function '" + name + "' at offset " + std::to_string(start));
            ++pos_;
            Node n{fn->op, 0.0, {}, {}};
            n.args.push_back(expression());
            if (fn->arity == 2) {
                expect(',');
                n.args.push_back(expression());
            }
            expect(')');
            return n;
        }
        if (name == "x") return Node{Op::Var, 0.0, {}, {}};
        return Node{Op::Const, 0.0, std::move(name), {}};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

const char* function_name(Op op) {
    for (const auto& f : kFunctions)
        if (f.op == op) return f.name;
    return nullptr;
}

char binary_symbol(Op op) {
    switch (op) {
        case Op::Add: return '+';
        case Op::Sub: return '-';
        case Op::Mul: return '*';
        case Op::Div: return '/';
        case Op::Pow: return '^';
        default: return 0;
    }
}

void collect(const Node& n, std::set<std::string>& out) {
    if (n.op == Op::Const) out.insert(n.name);
    for (const auto& a : n.args) collect(a, out);
}

// Integer exponents up to 16 in magnitude use repeated multiplication.
double power(double base, double e) {
    if (e == std::trunc(e) && std::abs(e) <= 16.0) {
        const int n = static_cast<int>(std::abs(e));
        double r = 1.0;
        for (int i = 0; i < n; ++i) r *= base;
        if (e < 0.0) {
            if (r == 0.0) throw ExprError("zero raised to a negative power");
            r = 1.0 / r;
        }
        return r;
    }
    if (base == 0.0) {
        if (e > 0.0) return 0.0;
        throw ExprError("zero raised to a non-positive power");
    }
    if (base < 0.0) {
        if (e == std::trunc(e)) return std::pow(base, e);
        throw ExprError("negative base with non-integer exponent");
    }
    return std::pow(base, e);
}

}  // namespace

Node parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Node& n) {
    switch (n.op) {
        case Op::Number: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            return buf;
        }
        case Op::Var: return "x";
        case Op::Const: return n.name;
        case Op::Neg: return "(-" + print(n.args[0]) + ")";
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
            return "(" + print(n.args[0]) + " " + binary_symbol(n.op) + " " + print(n.args[1]) + ")";
        default: {
            std::string s = std::string(function_name(n.op)) + "(" + print(n.args[0]);
            if (n.args.size() == 2) s += ", " + print(n.args[1]);
            return s + ")";
        }
    }
}

std::vector<std::string> constants(const Node& n) {
    std::set<std::string> s;
    collect(n, s);
    return {s.begin(), s.end()};
}

double eval_scalar(const Node& n, double x, const std::map<std::string, double>& consts) {
    auto arg = [&](std::size_t i) { return eval_scalar(n.args[i], x, consts); };
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return x;
        case Op::Const: {
            auto it = consts.find(n.name);
            if (it == consts.end()) throw ExprError("unbound name '" + n.name + "'");
            return it->second;
        }
        case Op::Neg: return -arg(0);
        case Op::Abs: return std::abs(arg(0));
        case Op::Sqrt: {
            const double a = arg(0);
            if (a < 0.0) throw ExprError("square root of a negative number");
            return std::sqrt(a);
        }
        case Op::Sin: return std::sin(arg(0));
        case Op::Cos: return std::cos(arg(0));
        case Op::Exp: return std::exp(arg(0));
        case Op::Add: return arg(0) + arg(1);
        case Op::Sub: return arg(0) - arg(1);
        case Op::Mul: return arg(0) * arg(1);
        case Op::Div: {
            const double num = arg(0);
            const double den = arg(1);
            if (den == 0.0) throw ExprError("division by zero");
            return num / den;
        }
        case Op::Pow: {
            const double b = arg(0);
            return power(b, arg(1));
        }
        case Op::Min: return std::min(arg(0), arg(1));
        case Op::Max: return std::max(arg(0), arg(1));
    }
    throw ExprError("corrupt expression tree");
}

namespace {

std::vector<std::map<std::string, double>> per_atom_constants(const Node& ast, const Bindings& bindings,
                                                             const SpacePtr& space) {
    std::vector<std::map<std::string, double>> out(space->size());
    for (const auto& name : constants(ast)) {
        auto it = bindings.find(name);
        if (it == bindings.end()) throw ExprError("unbound name '" + name + "'");
        require_same_space(space, it->second.space());
        for (std::size_t i = 0; i < out.size(); ++i) out[i][name] = it->second[i];
    }
    return out;
}

}  // namespace

L0Real eval(const Node& ast, const Bindings& bindings, const L0Real& x) {
    const auto consts = per_atom_constants(ast, bindings, x.space());
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        try {
            v[i] = eval_scalar(ast, x[i], consts[i]);
        } catch (const ExprError& e) {
            throw ExprError(std::string(e.what()) + " at atom '" + x.space()->id(i) + "'");
        }
    }
    return L0Real(x.space(), std::move(v));
}

LocalFunction compile(const Node& ast, const Bindings& bindings, const SpacePtr& space) {
    auto shared = std::make_shared<const Node>(ast);
    const auto consts = per_atom_constants(ast, bindings, space);
    std::vector<ScalarMap> maps;
    maps.reserve(space->size());
    for (std::size_t i = 0; i < space->size(); ++i) {
        maps.push_back([shared, c = consts[i], id = space->id(i)](double x) {
            try {
                return eval_scalar(*shared, x, c);
            } catch (const ExprError& e) {
                throw ExprError(std::string(e.what()) + " at atom '" + id + "'");
            }
        });
    }
    return LocalFunction(space, std::move(maps));
}

}  // namespace rnm::expr
