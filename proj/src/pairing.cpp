#include "arakelov/pairing.hpp"

#include <algorithm>
#include <sstream>

namespace arakelov {

// ------------------------------------------------------------ PairingVector

GenPair PairingVector::key(const std::string& a, const std::string& b) {
    return NaturalLess{}(b, a) ? GenPair{b, a} : GenPair{a, b};
}

void PairingVector::add(const std::string& a, const std::string& b, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(key(a, b), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) coeffs_.erase(it);
    }
}

Rational PairingVector::coeff(const std::string& a, const std::string& b) const {
    auto it = coeffs_.find(key(a, b));
    return it == coeffs_.end() ? Rational(0) : it->second;
}

PairingVector& PairingVector::operator+=(const PairingVector& o) {
    for (const auto& [k, c] : o.coeffs_) add(k.first, k.second, c);
    constant_ += o.constant_;
    return *this;
}

PairingVector& PairingVector::operator-=(const PairingVector& o) {
    for (const auto& [k, c] : o.coeffs_) add(k.first, k.second, -c);
    constant_ -= o.constant_;
    return *this;
}

PairingVector& PairingVector::operator*=(const Rational& k) {
    if (k == 0) {
        coeffs_.clear();
        constant_ = ConstExpr{};
        return *this;
    }
    for (auto& [_, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
}

std::string PairingVector::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
        Rational a = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (a != 1) os << to_string(a) << "*";
        os << "<" << k.first << "," << k.second << ">";
    }
    if (!constant_.is_zero()) {
        if (!first) os << " + ";
        os << "e^{" << constant_.str() << "}";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const PairingVector& v) { return os << v.str(); }

// ------------------------------------------------------------------ RuleSet

RuleSet RuleSet::adjunction() { return RuleSet{}; }

RuleSet RuleSet::cuspidal() {
    RuleSet r;
    r.regime_ = Regime::Cuspidal;
    r.symbolic_ = true;
    return r;
}

RuleSet RuleSet::cuspidal(ConstExpr alpha, std::vector<ConstExpr> betas) {
    RuleSet r;
    r.regime_ = Regime::Cuspidal;
    r.symbolic_ = false;
    r.alpha_ = std::move(alpha);
    r.betas_ = std::move(betas);
    return r;
}

ConstExpr RuleSet::alpha() const {
    if (adjunction_enabled()) return {};
    return symbolic_ ? ConstExpr::symbol(sym::ALPHA) : alpha_;
}

ConstExpr RuleSet::beta(int i) const {
    if (adjunction_enabled()) return {};
    if (symbolic_) return ConstExpr::symbol(sym::beta(i));
    if (i < 1 || i > static_cast<int>(betas_.size())) return {};
    return betas_[i - 1];
}

LineExpr RuleSet::decorate(const LineExpr& plain, const CurveContext& ctx) const {
    if (adjunction_enabled()) return plain;
    ConstExpr t;
    for (const auto& [g, k] : plain.cls()) {
        if (g == ctx.canonical())
            t += alpha() * k;
        else if (ctx.is_mark(g))
            t += beta(ctx.mark_index(g)) * k;
        else
            throw ContextError("generator " + g + " unknown to the context");
    }
    return plain.with_twist(t);
}

LineExpr RuleSet::canonical(const CurveContext& ctx) const {
    return decorate(canonical_bundle(ctx), ctx);
}

void RuleSet::validate(const CurveContext& ctx) const {
    if (!adjunction_enabled() && !ctx.hyperbolic())
        throw ContextError("cuspidal rules need 2q + N >= 3");
    if (!adjunction_enabled() && !symbolic_ && static_cast<int>(betas_.size()) != ctx.n_marks())
        throw ContextError("cuspidal rules: one beta per mark expected");
}

// --------------------------------------------------------------- operations

PairingVector deligne_pair(const LineExpr& a, const LineExpr& b, const CurveContext& ctx) {
    check_generators(a, ctx);
    check_generators(b, ctx);
    PairingVector v;
    for (const auto& [g, k] : a.cls())
        for (const auto& [h, l] : b.cls()) v.add(g, h, k * l);
    v.add_constant(a.twist() * rational_degree(b, ctx));
    v.add_constant(b.twist() * rational_degree(a, ctx));
    return v;
}

PairingVector lambda_expand(const LineExpr& L, const CurveContext& ctx) {
    return lambda_expand(L, ctx, canonical_bundle(ctx));
}

PairingVector lambda_expand(const LineExpr& L, const CurveContext& ctx, const LineExpr& canonical) {
    PairingVector v = deligne_pair(L, L, ctx) * Rational(6);
    v -= deligne_pair(L, canonical, ctx) * Rational(6);
    v += deligne_pair(canonical, canonical, ctx);
    v.add_constant(deligne_constant(ctx.genus()));
    return v;
}

namespace {

bool is_adjunction_pair(const std::string& a, const std::string& b, const CurveContext& ctx,
                        std::string& mark) {
    if (a == ctx.canonical() && ctx.is_mark(b)) {
        mark = b;
        return true;
    }
    if (b == ctx.canonical() && ctx.is_mark(a)) {
        mark = a;
        return true;
    }
    return false;
}

bool is_disjoint_pair(const std::string& a, const std::string& b, const CurveContext& ctx) {
    return a != b && ctx.is_mark(a) && ctx.is_mark(b);
}

}  // namespace

PairingVector normalize(const PairingVector& v, const CurveContext& ctx, const RuleSet& rules) {
    PairingVector out;
    out.add_constant(v.constant());
    for (const auto& [k, c] : v.coeffs()) {
        std::string m;
        if (rules.adjunction_enabled() && is_adjunction_pair(k.first, k.second, ctx, m))
            out.add(m, m, -c);
        else if (rules.disjoint_sections && is_disjoint_pair(k.first, k.second, ctx))
            continue;
        else
            out.add(k.first, k.second, c);
    }
    return out;
}

PairingVector normalize_shuffled(const PairingVector& v, const CurveContext& ctx, const RuleSet& rules,
                                 std::mt19937_64& rng) {
    struct Raw {
        std::string a, b;
        Rational c;
    };
    std::vector<Raw> terms;
    std::uniform_int_distribution<int> small(-5, 5), parts(1, 3), coin(0, 1);
    for (const auto& [k, c] : v.coeffs()) {
        int np = parts(rng);
        Rational rest = c;
        for (int p = 0; p < np; ++p) {
            Rational piece = (p + 1 == np) ? rest : frac(small(rng), 1 + coin(rng));
            rest -= piece;
            if (coin(rng))
                terms.push_back({k.second, k.first, piece});
            else
                terms.push_back({k.first, k.second, piece});
        }
    }
    std::shuffle(terms.begin(), terms.end(), rng);

    NaturalLess lt;
    // 0 orient, 1 merge, 2 adjunction, 3 disjoint, 4 drop zero
    struct Step {
        int kind;
        size_t i, j;
    };
    for (;;) {
        std::vector<Step> steps;
        for (size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            std::string m;
            if (t.c == 0) steps.push_back({4, i, 0});
            if (lt(t.b, t.a)) steps.push_back({0, i, 0});
            if (rules.adjunction_enabled() && is_adjunction_pair(t.a, t.b, ctx, m))
                steps.push_back({2, i, 0});
            if (rules.disjoint_sections && is_disjoint_pair(t.a, t.b, ctx)) steps.push_back({3, i, 0});
            for (size_t j = i + 1; j < terms.size(); ++j)
                if (terms[j].a == t.a && terms[j].b == t.b) steps.push_back({1, i, j});
        }
        if (steps.empty()) break;
        Step s = steps[std::uniform_int_distribution<size_t>(0, steps.size() - 1)(rng)];
        auto& t = terms[s.i];
        switch (s.kind) {
            case 0:
                std::swap(t.a, t.b);
                break;
            case 1:
                t.c += terms[s.j].c;
                terms.erase(terms.begin() + static_cast<long>(s.j));
                break;
            case 2: {
                std::string m;
                is_adjunction_pair(t.a, t.b, ctx, m);
                t = Raw{m, m, -t.c};
                break;
            }
            case 3:
            case 4:
                terms.erase(terms.begin() + static_cast<long>(s.i));
                break;
        }
    }
    PairingVector out;
    out.add_constant(v.constant());
    for (const auto& t : terms) out.add(t.a, t.b, t.c);
    return out;
}

PairingVector delta_bundle(int kind, const CurveContext& ctx, const RuleSet& rules) {
    if (kind < 0 || kind > 2) throw std::out_of_range("Delta kind must be 0, 1 or 2");
    LineExpr K = rules.canonical(ctx);
    LineExpr D = rules.decorate(mark_divisor(ctx), ctx);
    if (kind == 0) return deligne_pair(K * D, K * D, ctx);
    if (!rules.adjunction_enabled()) {
        if (kind == 1) return deligne_pair(K, D, ctx) * Rational(-1);
        return deligne_pair(K * D, D, ctx) * frac(1, 2);
    }
    PairingVector v;
    const auto& m = ctx.marks();
    if (kind == 1) {
        for (const auto& p : m) v.add(p, p, 1);
    } else {
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j) v.add(m[i], m[j], 1);
    }
    return v;
}

LineExpr lambda_n(long n, const CurveContext& ctx) {
    LineExpr K = canonical_bundle(ctx), D = mark_divisor(ctx);
    if (n > 0) return K.pow(n) * D.pow(n - 1);
    if (n == 0) return LineExpr::trivial();
    return (K * D).pow(n);
}

LineExpr lambda_n(long n, const CurveContext& ctx, const RuleSet& rules) {
    return rules.decorate(lambda_n(n, ctx), ctx);
}

ClaimFactor ClaimFactor::lambda(const LineExpr& L, const Rational& e) {
    ClaimFactor f;
    f.kind = Kind::Lambda;
    f.a = L;
    f.exponent = e;
    return f;
}

ClaimFactor ClaimFactor::lambda_n(long n, const Rational& e) {
    ClaimFactor f;
    f.kind = Kind::LambdaN;
    f.index = n;
    f.exponent = e;
    return f;
}

ClaimFactor ClaimFactor::pair(const LineExpr& a, const LineExpr& b, const Rational& e) {
    ClaimFactor f;
    f.kind = Kind::Pairing;
    f.a = a;
    f.b = b;
    f.exponent = e;
    return f;
}

ClaimFactor ClaimFactor::delta(int kind, const Rational& e) {
    ClaimFactor f;
    f.kind = Kind::Delta;
    f.index = kind;
    f.exponent = e;
    return f;
}

ClaimFactor ClaimFactor::twist(const ConstExpr& c, const Rational& e) {
    ClaimFactor f;
    f.kind = Kind::Twist;
    f.constant = c;
    f.exponent = e;
    return f;
}

PairingVector evaluate_side(const std::vector<ClaimFactor>& side, const CurveContext& ctx,
                            const RuleSet& rules) {
    PairingVector total;
    const LineExpr K = rules.canonical(ctx);
    for (const auto& f : side) {
        if (f.kind != ClaimFactor::Kind::Twist && Rational(f.exponent * 12).get_den() != 1)
            throw MalformedClaim("exponent " + to_string(f.exponent) +
                                 " does not clear at the x12 scale");
        PairingVector v;
        switch (f.kind) {
            case ClaimFactor::Kind::Lambda:
                v = lambda_expand(rules.decorate(f.a, ctx), ctx, K) * frac(1, 12);
                break;
            case ClaimFactor::Kind::LambdaN:
                v = lambda_expand(lambda_n(f.index, ctx, rules), ctx, K) * frac(1, 12);
                break;
            case ClaimFactor::Kind::Pairing:
                v = deligne_pair(rules.decorate(f.a, ctx), rules.decorate(f.b, ctx), ctx);
                break;
            case ClaimFactor::Kind::Delta:
                v = delta_bundle(static_cast<int>(f.index), ctx, rules);
                break;
            case ClaimFactor::Kind::Twist:
                v.add_constant(f.constant);
                break;
        }
        total += v * f.exponent;
    }
    return total;
}

Verdict verify_identity(const IdentityClaim& claim, const CurveContext& ctx, const RuleSet& rules) {
    rules.validate(ctx);
    PairingVector lhs = normalize(evaluate_side(claim.lhs, ctx, rules), ctx, rules);
    PairingVector rhs = normalize(evaluate_side(claim.rhs, ctx, rules), ctx, rules);
    PairingVector diff = lhs - rhs;
    return Verdict{diff.is_zero(), diff};
}

PairingVector restriction_line(const LineExpr& L, const std::string& mark, const CurveContext& ctx,
                               const RuleSet& rules) {
    if (!ctx.is_mark(mark)) throw ContextError("unknown mark " + mark);
    LineExpr P = LineExpr::generator(mark);
    return normalize(deligne_pair(rules.decorate(L, ctx), rules.decorate(P, ctx), ctx), ctx, rules);
}

// ------------------------------------------------------------------ boundary

LineExpr boundary_substitute(const LineExpr& L, const CurveContext& ctx, const CurveContext& bctx) {
    const auto& par = bctx.parent();
    if (!par || static_cast<int>(par->marks.size()) != ctx.n_marks() || bctx.genus() + 1 != ctx.genus())
        throw ContextError("not the boundary context of this curve");
    LineExpr out = LineExpr::twist(L.twist());
    for (const auto& [g, k] : L.cls()) {
        if (g == ctx.canonical()) {
            out *= LineExpr::generator(par->canonical, k);
            out *= LineExpr::generator(par->r, k);
            out *= LineExpr::generator(par->s, k);
        } else {
            out *= LineExpr::generator(par->marks[ctx.mark_index(g) - 1], k);
        }
    }
    return out;
}

PairingVector boundary_substitute(const PairingVector& v, const CurveContext& ctx,
                                  const CurveContext& bctx) {
    PairingVector out;
    out.add_constant(v.constant());
    for (const auto& [k, c] : v.coeffs()) {
        LineExpr a = boundary_substitute(LineExpr::generator(k.first), ctx, bctx);
        LineExpr b = boundary_substitute(LineExpr::generator(k.second), ctx, bctx);
        out += deligne_pair(a, b, bctx) * c;
    }
    return out;
}

PairingVector boundary_substitute(const PairingVector& v, const CurveContext& ctx) {
    return boundary_substitute(v, ctx, ctx.boundary());
}

bool separating_degree_condition(long d1, long q1, long d2, long q2) {
    return d1 * (2 * q2 - 1) == d2 * (2 * q1 - 1);
}

// ------------------------------------------------------------------- Chern

ChernAssignment basic_chern_assignment(const CurveContext& ctx, const RuleSet& rules) {
    auto nd = [&](int k) { return normalize(delta_bundle(k, ctx, rules), ctx, rules); };
    return {{"Delta0", nd(0), ConstExpr::symbol(form::WP)},
            {"Delta1", nd(1), ConstExpr::symbol(form::C1_DELTA1)},
            {"Delta2", nd(2), ConstExpr::symbol(form::C1_DELTA2)}};
}

ChernAssignment tz_chern_assignment(const CurveContext& ctx, const RuleSet& rules) {
    auto nd = [&](int k) { return normalize(delta_bundle(k, ctx, rules), ctx, rules); };
    return {{"Delta0", nd(0), ConstExpr::symbol(form::WP)},
            {"Delta1-2*Delta2", nd(1) - nd(2) * Rational(2), ConstExpr::symbol(form::TZ, frac(4, 3))},
            {"Delta2", nd(2), ConstExpr::symbol(form::C1_DELTA2)}};
}

ConstExpr chern_form(const PairingVector& v, const ChernAssignment& assignment, const CurveContext& ctx,
                     const RuleSet& rules) {
    PairingVector target = normalize(v, ctx, rules);
    std::vector<GenPair> keys;
    auto collect = [&](const PairingVector& p) {
        for (const auto& [k, _] : p.coeffs())
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    };
    for (const auto& b : assignment) collect(b.block);
    collect(target);
    for (const auto& [k, _] : target.coeffs()) {
        bool covered = std::any_of(assignment.begin(), assignment.end(),
                                   [&](const ChernBlock& b) { return b.block.coeff(k.first, k.second) != 0; });
        if (!covered) throw ConfigurationError("unassigned basis pair <" + k.first + "," + k.second + ">");
    }

    const size_t m = assignment.size(), rows = keys.size();
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(m + 1));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < m; ++c) A[r][c] = assignment[c].block.coeff(keys[r].first, keys[r].second);
        A[r][m] = target.coeff(keys[r].first, keys[r].second);
    }
    std::vector<long> pivot_col_of_row;
    size_t prow = 0;
    for (size_t c = 0; c < m && prow < rows; ++c) {
        size_t piv = prow;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[prow]);
        Rational inv = 1 / A[prow][c];
        for (auto& x : A[prow]) x *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == prow || A[r][c] == 0) continue;
            Rational f = A[r][c];
            for (size_t cc = 0; cc <= m; ++cc) A[r][cc] -= f * A[prow][cc];
        }
        pivot_col_of_row.push_back(static_cast<long>(c));
        ++prow;
    }
    for (size_t r = prow; r < rows; ++r)
        if (A[r][m] != 0) throw ConfigurationError("vector is not in the span of the assigned blocks");

    ConstExpr out;
    for (size_t r = 0; r < prow; ++r) out += assignment[pivot_col_of_row[r]].image * A[r][m];
    return out;
}

ConstExpr ChernPolynomial::at(long n) const {
    ConstExpr out;
    for (const auto& [s, c] : coeffs) out += ConstExpr::symbol(s, c[0] + c[1] * n + c[2] * n * n);
    return out;
}

std::string ChernPolynomial::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : coeffs) {
        std::ostringstream poly;
        bool pf = true;
        int nterms = 0;
        auto put = [&](const Rational& a, const char* mono) {
            if (a == 0) return;
            ++nterms;
            Rational b = abs(a);
            poly << (pf ? (a < 0 ? "-" : "") : (a < 0 ? " - " : " + "));
            pf = false;
            if (b != 1 || *mono == 0) poly << to_string(b);
            poly << mono;
        };
        put(c[2], "n^2");
        put(c[1], "n");
        put(c[0], "");
        if (nterms == 0) continue;
        os << (first ? "" : " + ") << "(" << poly.str() << ")*" << s;
        first = false;
    }
    return first ? "0" : os.str();
}

ChernPolynomial chern_lambda_n(const CurveContext& ctx, const RuleSet& rules, const ChernAssignment& a,
                               long validate_to) {
    auto value = [&](long n) {
        PairingVector v = lambda_expand(lambda_n(n, ctx, rules), ctx, rules.canonical(ctx));
        return chern_form(v, a, ctx, rules);
    };
    ConstExpr f1 = value(1), f2 = value(2), f3 = value(3);
    ChernPolynomial p;
    std::vector<std::string> names;
    for (const auto* f : {&f1, &f2, &f3})
        for (const auto& [s, _] : f->terms()) names.push_back(s);
    for (const auto& s : names) {
        Rational y1 = f1.coeff(s), y2 = f2.coeff(s), y3 = f3.coeff(s);
        // Newton form through n = 1, 2, 3
        Rational d1 = y2 - y1, d2 = (y3 - 2 * y2 + y1) / 2;
        Rational c2 = d2, c1 = d1 - 3 * d2, c0 = y1 - c1 - c2;
        p.coeffs[s] = {c0, c1, c2};
    }
    for (long n = 4; n <= validate_to; ++n)
        if (!(p.at(n) == value(n)))
            throw DomainError("12 c1(lambda_n) is not quadratic in n at n = " + std::to_string(n));
    return p;
}

}  // namespace arakelov
