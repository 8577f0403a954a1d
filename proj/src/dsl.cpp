#include "arakelov/dsl.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace arakelov::dsl {

// -------------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok type;
    std::string text;
    Pos pos;
};

struct Lexed {
    std::vector<Token> tokens;
    std::map<int, std::string> comments;  // line -> comment text
};

Lexed lex(const std::string& src) {
    Lexed out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            size_t e = src.find('\n', i);
            if (e == std::string::npos) e = src.size();
            std::string text = src.substr(i + 1, e - i - 1);
            size_t b = text.find_first_not_of(" \t#");
            size_t f = text.find_last_not_of(" \t\r");
            out.comments[line] = b == std::string::npos ? "" : text.substr(b, f - b + 1);
            advance(e - i);
            continue;
        }
        Pos p{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.tokens.push_back({Tok::Ident, src.substr(i, j - i), p});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.tokens.push_back({Tok::Int, src.substr(i, j - i), p});
            advance(j - i);
            continue;
        }
        if (src.compare(i, 2, "==") == 0 || src.compare(i, 2, "..") == 0) {
            out.tokens.push_back({Tok::Punct, src.substr(i, 2), p});
            advance(2);
            continue;
        }
        if (std::string("=;*/^(){},:+-").find(c) != std::string::npos) {
            out.tokens.push_back({Tok::Punct, std::string(1, c), p});
            advance(1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.tokens.push_back({Tok::End, "", Pos{line, col}});
    return out;
}

bool is_mark_name(const std::string& s) {
    if (s.size() < 2 || s[0] != 'P') return false;
    for (size_t k = 1; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    return s[1] != '0';
}

const std::set<std::string> kReserved = {"ctx",    "let",    "check",    "forall", "in",     "K",      "O",
                                         "D",      "lambda", "lambda_n", "Delta0", "Delta1", "Delta2", "pair",
                                         "e"};

// ------------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(const std::string& text) : lx_(lex(text)) {}

    Script script() {
        Script s;
        while (peek().type != Tok::End) s.statements.push_back(statement());
        return s;
    }

private:
    Lexed lx_;
    size_t at_ = 0;
    std::set<std::string> lets_;

    const Token& peek(size_t k = 0) const {
        size_t j = std::min(at_ + k, lx_.tokens.size() - 1);
        return lx_.tokens[j];
    }
    Token next() {
        Token t = peek();
        if (at_ < lx_.tokens.size() - 1) ++at_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        std::string where = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(msg + " at " + where, t.pos.line, t.pos.col);
    }
    bool is(const std::string& p, size_t k = 0) const {
        const Token& t = peek(k);
        return (t.type == Tok::Punct || t.type == Tok::Ident) && t.text == p;
    }
    Token expect(const std::string& p) {
        if (!is(p)) fail("expected '" + p + "'", peek());
        return next();
    }
    Token expect_ident() {
        if (peek().type != Tok::Ident) fail("expected identifier", peek());
        return next();
    }
    long expect_int(bool allow_sign) {
        bool neg = false;
        if (allow_sign && is("-")) {
            next();
            neg = true;
        }
        if (peek().type != Tok::Int) fail("expected integer", peek());
        Token t = next();
        if (t.text.size() > 9) fail("integer too large", t);
        long v = std::stol(t.text);
        return neg ? -v : v;
    }

    std::string label_above(int line) const {
        std::vector<std::string> parts;
        for (int l = line - 1; l >= 1; --l) {
            auto it = lx_.comments.find(l);
            if (it == lx_.comments.end()) break;
            parts.insert(parts.begin(), it->second);
        }
        std::string s;
        for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
        return s;
    }

    Statement statement() {
        const Token& t = peek();
        if (is("ctx")) return ctx_decl();
        if (is("let")) return let_decl();
        if (is("check") || is("forall")) {
            Check c = check(label_above(t.pos.line));
            return c;
        }
        fail("expected 'ctx', 'let', 'check' or 'forall'", t);
    }

    CtxDecl ctx_decl() {
        CtxDecl d;
        d.pos = next().pos;
        expect("q");
        expect("=");
        d.q = static_cast<int>(expect_int(false));
        expect("N");
        expect("=");
        d.N = static_cast<int>(expect_int(false));
        expect("rules");
        expect("=");
        Token r = expect_ident();
        if (r.text == "adjunction")
            d.rules = Regime::Adjunction;
        else if (r.text == "cuspidal")
            d.rules = Regime::Cuspidal;
        else
            fail("rules must be 'adjunction' or 'cuspidal'", r);
        expect(";");
        return d;
    }

    LetDecl let_decl() {
        LetDecl d;
        d.pos = next().pos;
        Token name = expect_ident();
        if (kReserved.count(name.text) || is_mark_name(name.text)) fail("reserved name", name);
        d.name = name.text;
        expect("=");
        d.value = expr();
        expect(";");
        lets_.insert(d.name);
        return d;
    }

    Check check(const std::string& label) {
        Check c;
        c.label = label;
        while (is("forall")) {
            Quantifier qf;
            qf.pos = next().pos;
            Token v = expect_ident();
            if (kReserved.count(v.text) || is_mark_name(v.text)) fail("reserved name", v);
            qf.var = v.text;
            expect("in");
            Token lo_tok = peek();
            qf.lo = expect_int(true);
            expect("..");
            qf.hi = expect_int(true);
            if (qf.hi < qf.lo) throw SyntaxError("empty range", lo_tok.pos.line, lo_tok.pos.col);
            if (qf.hi - qf.lo > kMaxRange)
                throw SyntaxError("range too large to be finite in practice", lo_tok.pos.line, lo_tok.pos.col);
            expect(":");
            c.quantifiers.push_back(qf);
        }
        c.pos = expect("check").pos;
        c.lhs = expr();
        expect("==");
        c.rhs = expr();
        expect(";");
        return c;
    }

    ExprPtr make(Expr::Kind k, Pos p) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->pos = p;
        return e;
    }

    ExprPtr expr() {
        ExprPtr left = term();
        while (is("*") || is("/")) {
            Token op = next();
            ExprPtr e = make(op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div, op.pos);
            e->kids = {left, term()};
            left = e;
        }
        return left;
    }

    ExprPtr term() {
        ExprPtr a = atom();
        if (is("^")) {
            Token op = next();
            ExprPtr e = make(Expr::Kind::Pow, op.pos);
            e->kids = {a};
            e->arith = exponent();
            return e;
        }
        return a;
    }

    ArithPtr mk(Arith::Op op, Pos p) {
        auto a = std::make_shared<Arith>();
        a->op = op;
        a->pos = p;
        return a;
    }

    ArithPtr number_token() {
        Token t = next();
        if (t.text.size() > 18) fail("integer too large", t);
        ArithPtr a = mk(Arith::Op::Num, t.pos);
        a->num = Rational(t.text);
        return a;
    }

    ArithPtr exponent() {
        if (is("(")) {
            next();
            ArithPtr a = arith();
            expect(")");
            return a;
        }
        if (peek().type == Tok::Ident) {
            Token t = next();
            ArithPtr a = mk(Arith::Op::Name, t.pos);
            a->name = t.text;
            return a;
        }
        bool neg = false;
        Pos p = peek().pos;
        if (is("-")) {
            next();
            neg = true;
        }
        if (peek().type != Tok::Int) fail("expected exponent", peek());
        ArithPtr a = number_token();
        if (is("/") && peek(1).type == Tok::Int) {
            Token slash = next();
            ArithPtr d = mk(Arith::Op::Div, slash.pos);
            d->kids = {a, number_token()};
            a = d;
        }
        if (neg) {
            ArithPtr n = mk(Arith::Op::Neg, p);
            n->kids = {a};
            a = n;
        }
        return a;
    }

    ExprPtr atom() {
        const Token t = peek();
        if (is("(")) {
            next();
            ExprPtr e = expr();
            expect(")");
            return e;
        }
        if (t.type != Tok::Ident) fail("expected a line expression", t);
        next();
        const std::string& s = t.text;
        if (s == "K") return make(Expr::Kind::Canonical, t.pos);
        if (s == "O") return make(Expr::Kind::Trivial, t.pos);
        if (s == "D") return make(Expr::Kind::Divisor, t.pos);
        if (s == "Delta0" || s == "Delta1" || s == "Delta2") {
            ExprPtr e = make(Expr::Kind::Delta, t.pos);
            e->index = s.back() - '0';
            return e;
        }
        if (s == "lambda") {
            expect("(");
            ExprPtr e = make(Expr::Kind::Lambda, t.pos);
            e->kids = {expr()};
            expect(")");
            return e;
        }
        if (s == "lambda_n") {
            expect("(");
            ExprPtr e = make(Expr::Kind::LambdaN, t.pos);
            e->arith = arith();
            expect(")");
            return e;
        }
        if (s == "pair") {
            expect("(");
            ExprPtr e = make(Expr::Kind::Pair, t.pos);
            ExprPtr a = expr();
            expect(",");
            ExprPtr b = expr();
            expect(")");
            e->kids = {a, b};
            return e;
        }
        if (s == "e") {
            expect("^");
            expect("{");
            ExprPtr e = make(Expr::Kind::Exp, t.pos);
            e->arith = arith();
            expect("}");
            return e;
        }
        if (is_mark_name(s)) {
            ExprPtr e = make(Expr::Kind::Mark, t.pos);
            e->name = s;
            return e;
        }
        if (lets_.count(s)) {
            ExprPtr e = make(Expr::Kind::Ref, t.pos);
            e->name = s;
            return e;
        }
        throw SyntaxError("unknown identifier '" + s + "'", t.pos.line, t.pos.col);
    }

    ArithPtr arith() {
        ArithPtr left = aterm();
        while (is("+") || is("-")) {
            Token op = next();
            ArithPtr a = mk(op.text == "+" ? Arith::Op::Add : Arith::Op::Sub, op.pos);
            a->kids = {left, aterm()};
            left = a;
        }
        return left;
    }

    ArithPtr aterm() {
        ArithPtr left = aunary();
        while (is("*") || is("/")) {
            Token op = next();
            ArithPtr a = mk(op.text == "*" ? Arith::Op::Mul : Arith::Op::Div, op.pos);
            a->kids = {left, aunary()};
            left = a;
        }
        return left;
    }

    ArithPtr aunary() {
        if (is("-")) {
            Token op = next();
            ArithPtr a = mk(Arith::Op::Neg, op.pos);
            a->kids = {aunary()};
            return a;
        }
        ArithPtr base = aprimary();
        if (is("^")) {
            Token op = next();
            ArithPtr a = mk(Arith::Op::Pow, op.pos);
            a->kids = {base, aunary()};
            return a;
        }
        return base;
    }

    ArithPtr aprimary() {
        const Token t = peek();
        if (t.type == Tok::Int) return number_token();
        if (is("(")) {
            next();
            ArithPtr a = arith();
            expect(")");
            return a;
        }
        if (t.type == Tok::Ident) {
            next();
            if (t.text == "a" && is("(")) {
                next();
                ArithPtr a = mk(Arith::Op::Deligne, t.pos);
                a->kids = {arith()};
                expect(")");
                return a;
            }
            ArithPtr a = mk(Arith::Op::Name, t.pos);
            a->name = t.text;
            return a;
        }
        fail("expected a number or name", t);
    }
};

// ------------------------------------------------------------------ printer

int prec(const Arith& a) {
    switch (a.op) {
        case Arith::Op::Add:
        case Arith::Op::Sub:
            return 1;
        case Arith::Op::Mul:
        case Arith::Op::Div:
            return 2;
        case Arith::Op::Neg:
            return 3;
        case Arith::Op::Pow:
            return 4;
        default:
            return 5;
    }
}

std::string wrap(const Arith& a, int need) {
    std::string s = print(a);
    return prec(a) < need ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Arith& a) {
    switch (a.op) {
        case Arith::Op::Num:
            return to_string(a.num);
        case Arith::Op::Name:
            return a.name;
        case Arith::Op::Deligne:
            return "a(" + print(*a.kids[0]) + ")";
        case Arith::Op::Neg:
            return "-" + wrap(*a.kids[0], 3);
        case Arith::Op::Add:
            return wrap(*a.kids[0], 1) + " + " + wrap(*a.kids[1], 2);
        case Arith::Op::Sub:
            return wrap(*a.kids[0], 1) + " - " + wrap(*a.kids[1], 2);
        case Arith::Op::Mul:
            return wrap(*a.kids[0], 2) + "*" + wrap(*a.kids[1], 3);
        case Arith::Op::Div:
            return wrap(*a.kids[0], 2) + "/" + wrap(*a.kids[1], 3);
        case Arith::Op::Pow:
            return wrap(*a.kids[0], 5) + "^" + wrap(*a.kids[1], 3);
    }
    return "";
}

std::string print(const Expr& e) {
    auto factor = [](const Expr& x) {
        std::string s = print(x);
        bool compound = x.kind == Expr::Kind::Mul || x.kind == Expr::Kind::Div || x.kind == Expr::Kind::Pow;
        return compound ? "(" + s + ")" : s;
    };
    switch (e.kind) {
        case Expr::Kind::Canonical:
            return "K";
        case Expr::Kind::Trivial:
            return "O";
        case Expr::Kind::Divisor:
            return "D";
        case Expr::Kind::Mark:
        case Expr::Kind::Ref:
            return e.name;
        case Expr::Kind::Delta:
            return "Delta" + std::to_string(e.index);
        case Expr::Kind::Lambda:
            return "lambda(" + print(*e.kids[0]) + ")";
        case Expr::Kind::LambdaN:
            return "lambda_n(" + print(*e.arith) + ")";
        case Expr::Kind::Pair:
            return "pair(" + print(*e.kids[0]) + ", " + print(*e.kids[1]) + ")";
        case Expr::Kind::Exp:
            return "e^{" + print(*e.arith) + "}";
        case Expr::Kind::Mul: {
            const Expr& r = *e.kids[1];
            bool wrap_r = r.kind == Expr::Kind::Mul || r.kind == Expr::Kind::Div;
            return print(*e.kids[0]) + " * " + (wrap_r ? "(" + print(r) + ")" : print(r));
        }
        case Expr::Kind::Div: {
            const Expr& r = *e.kids[1];
            bool wrap_r = r.kind == Expr::Kind::Mul || r.kind == Expr::Kind::Div;
            return print(*e.kids[0]) + " / " + (wrap_r ? "(" + print(r) + ")" : print(r));
        }
        case Expr::Kind::Pow: {
            const Arith& x = *e.arith;
            std::string ex = (x.op == Arith::Op::Num && x.num.get_den() == 1) ? to_string(x.num)
                                                                               : "(" + print(x) + ")";
            return factor(*e.kids[0]) + "^" + ex;
        }
    }
    return "";
}

std::string print(const Script& s) {
    std::ostringstream os;
    for (const auto& st : s.statements) {
        if (const auto* c = std::get_if<CtxDecl>(&st)) {
            os << "ctx q=" << c->q << " N=" << c->N
               << " rules=" << (c->rules == Regime::Adjunction ? "adjunction" : "cuspidal") << ";\n";
        } else if (const auto* l = std::get_if<LetDecl>(&st)) {
            os << "let " << l->name << " = " << print(*l->value) << ";\n";
        } else if (const auto* ch = std::get_if<Check>(&st)) {
            if (!ch->label.empty()) os << "# " << ch->label << "\n";
            for (const auto& q : ch->quantifiers) os << "forall " << q.var << " in " << q.lo << ".." << q.hi << ": ";
            os << "check " << print(*ch->lhs) << " == " << print(*ch->rhs) << ";\n";
        }
    }
    return os.str();
}

namespace {

bool same_arith(const ArithPtr& a, const ArithPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->op != b->op || a->num != b->num || a->name != b->name || a->kids.size() != b->kids.size())
        return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!same_arith(a->kids[i], b->kids[i])) return false;
    return true;
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->name != b->name || a->index != b->index || a->kids.size() != b->kids.size() ||
        !same_arith(a->arith, b->arith))
        return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!same_expr(a->kids[i], b->kids[i])) return false;
    return true;
}

}  // namespace

bool same(const Script& a, const Script& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (size_t i = 0; i < a.statements.size(); ++i) {
        const auto& x = a.statements[i];
        const auto& y = b.statements[i];
        if (x.index() != y.index()) return false;
        if (const auto* c = std::get_if<CtxDecl>(&x)) {
            const auto& d = std::get<CtxDecl>(y);
            if (c->q != d.q || c->N != d.N || c->rules != d.rules) return false;
        } else if (const auto* l = std::get_if<LetDecl>(&x)) {
            const auto& m = std::get<LetDecl>(y);
            if (l->name != m.name || !same_expr(l->value, m.value)) return false;
        } else {
            const auto& c = std::get<Check>(x);
            const auto& d = std::get<Check>(y);
            if (c.label != d.label || c.quantifiers.size() != d.quantifiers.size()) return false;
            for (size_t k = 0; k < c.quantifiers.size(); ++k) {
                const auto& p = c.quantifiers[k];
                const auto& r = d.quantifiers[k];
                if (p.var != r.var || p.lo != r.lo || p.hi != r.hi) return false;
            }
            if (!same_expr(c.lhs, d.lhs) || !same_expr(c.rhs, d.rhs)) return false;
        }
    }
    return true;
}

Script parse(const std::string& text) { return Parser(text).script(); }

// ---------------------------------------------------------------- evaluator

namespace {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string at(const Pos& p) { return " at " + std::to_string(p.line) + ":" + std::to_string(p.col); }

struct Env {
    const CurveContext* ctx;
    const RuleSet* rules;
    std::map<std::string, long> scalars;  // q, N, quantifier variables
    const std::map<std::string, ExprPtr>* lets;
    std::set<std::string> expanding;
};

bool is_scalar(const ConstExpr& c) {
    return c.is_zero() || (c.terms().size() == 1 && c.terms().begin()->first == sym::UNIT);
}

Rational scalar_of(const ConstExpr& c, const Pos& p) {
    if (!is_scalar(c)) throw EvalError("expected a number, got " + c.str() + at(p));
    return c.coeff(sym::UNIT);
}

ConstExpr eval_arith(const Arith& a, const Env& env) {
    switch (a.op) {
        case Arith::Op::Num:
            return ConstExpr::number(a.num);
        case Arith::Op::Name: {
            auto it = env.scalars.find(a.name);
            if (it != env.scalars.end()) return ConstExpr::number(Rational(it->second));
            return ConstExpr::symbol(a.name);
        }
        case Arith::Op::Neg:
            return -eval_arith(*a.kids[0], env);
        case Arith::Op::Add:
            return eval_arith(*a.kids[0], env) + eval_arith(*a.kids[1], env);
        case Arith::Op::Sub:
            return eval_arith(*a.kids[0], env) - eval_arith(*a.kids[1], env);
        case Arith::Op::Mul: {
            ConstExpr x = eval_arith(*a.kids[0], env), y = eval_arith(*a.kids[1], env);
            if (is_scalar(x)) return y * x.coeff(sym::UNIT);
            if (is_scalar(y)) return x * y.coeff(sym::UNIT);
            throw EvalError("product of two symbolic constants is not linear" + at(a.pos));
        }
        case Arith::Op::Div: {
            ConstExpr x = eval_arith(*a.kids[0], env);
            Rational y = scalar_of(eval_arith(*a.kids[1], env), a.kids[1]->pos);
            if (y == 0) throw EvalError("division by zero" + at(a.pos));
            return x * Rational(1 / y);
        }
        case Arith::Op::Pow: {
            Rational b = scalar_of(eval_arith(*a.kids[0], env), a.kids[0]->pos);
            Rational e = scalar_of(eval_arith(*a.kids[1], env), a.kids[1]->pos);
            if (e.get_den() != 1) throw EvalError("non-integer power" + at(a.pos));
            long k = e.get_num().get_si();
            if (std::abs(k) > 64) throw EvalError("power too large" + at(a.pos));
            if (k < 0 && b == 0) throw EvalError("division by zero" + at(a.pos));
            Rational r = 1;
            for (long i = 0; i < std::abs(k); ++i) r *= b;
            return ConstExpr::number(k < 0 ? Rational(1 / r) : r);
        }
        case Arith::Op::Deligne: {
            Rational g = scalar_of(eval_arith(*a.kids[0], env), a.kids[0]->pos);
            if (g.get_den() != 1 || g < 0) throw EvalError("a(q) needs a non-negative integer" + at(a.pos));
            return deligne_constant(g.get_num().get_si());
        }
    }
    return {};
}

struct Value {
    enum class Kind { Bundle, Line, Const };
    Kind kind = Kind::Const;
    LineExpr bundle;
    std::vector<ClaimFactor> factors;
    ConstExpr c;
};

LineExpr as_bundle(const Value& v, const Pos& p) {
    if (v.kind == Value::Kind::Line) throw EvalError("expected a line bundle, got a determinant line" + at(p));
    if (v.kind == Value::Kind::Const) return LineExpr::twist(v.c);
    return v.bundle;
}

std::vector<ClaimFactor> as_factors(const Value& v, const Pos& p) {
    if (v.kind == Value::Kind::Bundle) {
        // O(e^c) reads as the trivial line with a constant twist
        if (!v.bundle.cls().empty()) throw EvalError("a line bundle cannot stand next to determinant lines" + at(p));
        if (v.bundle.twist().is_zero()) return {};
        return {ClaimFactor::twist(v.bundle.twist())};
    }
    if (v.kind == Value::Kind::Const) {
        if (v.c.is_zero()) return {};
        return {ClaimFactor::twist(v.c)};
    }
    return v.factors;
}

Value eval(const Expr& e, Env& env);

Value mul(const Value& a, const Value& b, const Pos& p) {
    using K = Value::Kind;
    Value r;
    if (a.kind == K::Const && b.kind == K::Const) {
        r.kind = K::Const;
        r.c = a.c + b.c;
    } else if (a.kind != K::Line && b.kind != K::Line) {
        r.kind = K::Bundle;
        r.bundle = as_bundle(a, p) * as_bundle(b, p);
    } else {
        r.kind = K::Line;
        r.factors = as_factors(a, p);
        auto fb = as_factors(b, p);
        r.factors.insert(r.factors.end(), fb.begin(), fb.end());
    }
    return r;
}

Value power(const Value& v, const Rational& k) {
    Value r = v;
    switch (v.kind) {
        case Value::Kind::Const:
            r.c = v.c * k;
            break;
        case Value::Kind::Bundle:
            r.bundle = v.bundle.pow(k);
            break;
        case Value::Kind::Line:
            for (auto& f : r.factors) f.exponent *= k;
            break;
    }
    return r;
}

Value eval(const Expr& e, Env& env) {
    Value v;
    const CurveContext& ctx = *env.ctx;
    switch (e.kind) {
        case Expr::Kind::Canonical:
            v.kind = Value::Kind::Bundle;
            v.bundle = canonical_bundle(ctx);
            return v;
        case Expr::Kind::Trivial:
            v.kind = Value::Kind::Bundle;
            return v;
        case Expr::Kind::Divisor:
            v.kind = Value::Kind::Bundle;
            v.bundle = mark_divisor(ctx);
            return v;
        case Expr::Kind::Mark: {
            int i = std::stoi(e.name.substr(1));
            if (i > ctx.n_marks())
                throw EvalError("mark " + e.name + " not declared (N=" + std::to_string(ctx.n_marks()) + ")" + at(e.pos));
            v.kind = Value::Kind::Bundle;
            v.bundle = mark_bundle(ctx, i);
            return v;
        }
        case Expr::Kind::Ref: {
            if (env.expanding.count(e.name)) throw EvalError("recursive let " + e.name + at(e.pos));
            env.expanding.insert(e.name);
            Value r = eval(*env.lets->at(e.name), env);
            env.expanding.erase(e.name);
            return r;
        }
        case Expr::Kind::Lambda:
            v.kind = Value::Kind::Line;
            v.factors = {ClaimFactor::lambda(as_bundle(eval(*e.kids[0], env), e.kids[0]->pos))};
            return v;
        case Expr::Kind::LambdaN: {
            Rational n = scalar_of(eval_arith(*e.arith, env), e.arith->pos);
            if (n.get_den() != 1) throw EvalError("lambda_n needs an integer" + at(e.pos));
            v.kind = Value::Kind::Line;
            v.factors = {ClaimFactor::lambda_n(n.get_num().get_si())};
            return v;
        }
        case Expr::Kind::Delta:
            v.kind = Value::Kind::Line;
            v.factors = {ClaimFactor::delta(e.index)};
            return v;
        case Expr::Kind::Pair:
            v.kind = Value::Kind::Line;
            v.factors = {ClaimFactor::pair(as_bundle(eval(*e.kids[0], env), e.kids[0]->pos),
                                           as_bundle(eval(*e.kids[1], env), e.kids[1]->pos))};
            return v;
        case Expr::Kind::Exp:
            v.kind = Value::Kind::Const;
            v.c = eval_arith(*e.arith, env);
            return v;
        case Expr::Kind::Mul:
            return mul(eval(*e.kids[0], env), eval(*e.kids[1], env), e.pos);
        case Expr::Kind::Div:
            return mul(eval(*e.kids[0], env), power(eval(*e.kids[1], env), -1), e.pos);
        case Expr::Kind::Pow: {
            Rational k = scalar_of(eval_arith(*e.arith, env), e.arith->pos);
            return power(eval(*e.kids[0], env), k);
        }
    }
    return v;
}

std::string context_str(const CurveContext& ctx, const RuleSet& rules) {
    return "q=" + std::to_string(ctx.genus()) + " N=" + std::to_string(ctx.n_marks()) + " rules=" + rules.name();
}

// true iff equal; fills diff text
bool evaluate_check(const Check& c, Env& env, std::string& diff) {
    Value l = eval(*c.lhs, env), r = eval(*c.rhs, env);
    bool line_side = l.kind == Value::Kind::Line || r.kind == Value::Kind::Line;
    if (!line_side) {
        LineExpr a = as_bundle(l, c.lhs->pos), b = as_bundle(r, c.rhs->pos);
        check_generators(a, *env.ctx);
        check_generators(b, *env.ctx);
        if (a == b) return true;
        diff = (a * b.dual()).str();
        return false;
    }
    IdentityClaim claim{as_factors(l, c.lhs->pos), as_factors(r, c.rhs->pos)};
    Verdict v = verify_identity(claim, *env.ctx, *env.rules);
    if (!v.equal) diff = v.diff.str();
    return v.equal;
}

void instantiate(const Check& c, size_t level, Env& env, CheckResult& res, const std::string& context) {
    if (level == c.quantifiers.size()) {
        Instance inst;
        inst.context = context;
        for (const auto& q : c.quantifiers) inst.bindings[q.var] = env.scalars.at(q.var);
        bool ok = false;
        try {
            ok = evaluate_check(c, env, inst.diff);
        } catch (const std::exception& ex) {
            inst.error = ex.what();
        }
        res.record(ok, std::move(inst));
        return;
    }
    const Quantifier& q = c.quantifiers[level];
    auto saved = env.scalars.find(q.var) != env.scalars.end() ? std::optional<long>(env.scalars[q.var]) : std::nullopt;
    for (long x = q.lo; x <= q.hi; ++x) {
        env.scalars[q.var] = x;
        instantiate(c, level + 1, env, res, context);
    }
    if (saved)
        env.scalars[q.var] = *saved;
    else
        env.scalars.erase(q.var);
}

}  // namespace

Report run(const Script& script, const RunOptions& opts) {
    Report report;
    report.title = opts.title;
    std::vector<std::pair<CurveContext, RuleSet>> contexts = opts.default_contexts;
    std::map<std::string, ExprPtr> lets;
    std::optional<std::string> ctx_error;

    for (const auto& st : script.statements) {
        if (const auto* d = std::get_if<CtxDecl>(&st)) {
            contexts.clear();
            ctx_error.reset();
            try {
                CurveContext ctx(d->q, d->N);
                RuleSet rules = d->rules == Regime::Adjunction ? RuleSet::adjunction() : RuleSet::cuspidal();
                rules.validate(ctx);
                contexts.emplace_back(ctx, rules);
            } catch (const std::exception& ex) {
                ctx_error = std::string(ex.what()) + at(d->pos);
            }
        } else if (const auto* l = std::get_if<LetDecl>(&st)) {
            lets[l->name] = l->value;
        } else {
            const Check& c = std::get<Check>(st);
            CheckResult res;
            res.id = "check@" + std::to_string(c.pos.line) + ":" + std::to_string(c.pos.col);
            res.line = c.pos.line;
            res.col = c.pos.col;
            res.label = c.label;
            if (contexts.empty()) {
                Instance inst;
                inst.error = ctx_error ? *ctx_error : "no ctx declared before this check";
                res.record(false, inst);
            }
            for (const auto& [ctx, rules] : contexts) {
                Env env{&ctx, &rules, {{"q", ctx.genus()}, {"N", ctx.n_marks()}}, &lets, {}};
                instantiate(c, 0, env, res, context_str(ctx, rules));
            }
            report.checks.push_back(std::move(res));
        }
    }
    return report;
}

}  // namespace arakelov::dsl
