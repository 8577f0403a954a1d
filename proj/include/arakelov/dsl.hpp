#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arakelov/pairing.hpp"
#include "arakelov/report.hpp"

namespace arakelov::dsl {

struct Pos {
    int line = 0, col = 0;
};

/// Scalar / constant arithmetic: exponents, lambda_n arguments and e^{...} bodies.
struct Arith {
    enum class Op { Num, Name, Neg, Add, Sub, Mul, Div, Pow, Deligne };
    Op op = Op::Num;
    Rational num;
    std::string name;
    std::vector<std::shared_ptr<Arith>> kids;
    Pos pos;
};
using ArithPtr = std::shared_ptr<Arith>;

struct Expr {
    enum class Kind { Canonical, Trivial, Divisor, Mark, Ref, Lambda, LambdaN, Delta, Pair, Exp, Mul, Div, Pow };
    Kind kind = Kind::Trivial;
    std::string name;  // mark or let name
    int index = 0;     // Delta kind
    std::vector<std::shared_ptr<Expr>> kids;
    ArithPtr arith;  // LambdaN argument, Exp body, Pow exponent
    Pos pos;
};
using ExprPtr = std::shared_ptr<Expr>;

struct CtxDecl {
    int q = 0, N = 0;
    Regime rules = Regime::Adjunction;
    Pos pos;
};

struct LetDecl {
    std::string name;
    ExprPtr value;
    Pos pos;
};

struct Quantifier {
    std::string var;
    long lo = 0, hi = 0;
    Pos pos;
};

struct Check {
    std::vector<Quantifier> quantifiers;  // outermost first
    ExprPtr lhs, rhs;
    Pos pos;  // of the "check" keyword
    std::string label;  // "#" comment on the line(s) just above
};

using Statement = std::variant<CtxDecl, LetDecl, Check>;

struct Script {
    std::vector<Statement> statements;
};

// Ranges longer than this are rejected as non-finite for practical purposes.
inline constexpr long kMaxRange = 100000;

Script parse(const std::string& text);

// Canonical printer; parse(print(s)) is structurally equal to s.
std::string print(const Script& s);
std::string print(const Expr& e);
std::string print(const Arith& a);

bool same(const Script& a, const Script& b);  // structural, ignores positions

struct RunOptions {
    // Contexts tried for every check that runs before the script's first ctx
    // declaration. Empty: such checks report an error.
    std::vector<std::pair<CurveContext, RuleSet>> default_contexts;
    std::string title;
};

Report run(const Script& script, const RunOptions& opts = {});

}  // namespace arakelov::dsl
