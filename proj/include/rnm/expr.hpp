#pragma once

// A small expression language for scalar maps of one variable `x` with named
// constants bound per atom.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | name | name '(' expr (',' expr)? ')' | '(' expr ')'
//
// Unary functions: abs sqrt sin cos exp. Binary functions: min max.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rnm/ivt.hpp"
#include "rnm/measure.hpp"

namespace rnm::expr {

enum class Op {
    Number,
    Var,
    Const,
    Neg,
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
};

/// Expression tree node. Number literals are non-negative; negation is a
/// separate node.
struct Node {
    Op op = Op::Number;
    double value = 0.0;
    std::string name;
    std::vector<Node> args;

    friend bool operator==(const Node&, const Node&) = default;
};

/// Throws ParseError (syntax, with byte offset) or ExprError (unknown function).
Node parse(std::string_view text);

/// Fully parenthesized text that parses back to an equal tree.
std::string print(const Node& n);

/// Names of the constants referenced by the tree, sorted.
std::vector<std::string> constants(const Node& n);

/// Scalar evaluation; throws ExprError on an unbound name or a domain error
/// (square root of a negative, division by zero, invalid power).
double eval_scalar(const Node& n, double x, const std::map<std::string, double>& consts);

using Bindings = std::map<std::string, L0Real>;

/// Atomwise evaluation. Domain errors name the offending atom.
L0Real eval(const Node& ast, const Bindings& bindings, const L0Real& x);

/// Per-atom closures over the tree with that atom's constant values.
LocalFunction compile(const Node& ast, const Bindings& bindings, const SpacePtr& space);

}  // namespace rnm::expr
