#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov {

using Rational = mpq_class;

std::string to_string(const Rational& r);

// mpq_class(n, d) is not canonicalized; always build fractions through here.
inline Rational frac(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// "P2" < "P10": digit runs compare by value.
struct NaturalLess {
    bool operator()(const std::string& a, const std::string& b) const;
};

namespace sym {
inline const std::string UNIT = "UNIT";
inline const std::string ZETA_PRIME = "ZETA_PRIME";
inline const std::string LOG_2PI = "LOG_2PI";
inline const std::string DELTA_M = "DELTA_M";
inline const std::string A_ARHYP = "A_ARHYP";
inline const std::string C_HYP = "C_HYP";
inline const std::string ALPHA = "ALPHA";
std::string beta(int i);  // BETA1, BETA2, ...
}  // namespace sym

/// Sparse exact combination of named constants. Zero coefficients are never stored.
class ConstExpr {
public:
    using Terms = std::map<std::string, Rational, NaturalLess>;

    ConstExpr() = default;
    static ConstExpr symbol(const std::string& name, const Rational& c = 1);
    static ConstExpr number(const Rational& c) { return symbol(sym::UNIT, c); }

    const Terms& terms() const { return terms_; }
    Rational coeff(const std::string& name) const;
    bool is_zero() const { return terms_.empty(); }

    ConstExpr& operator+=(const ConstExpr& o);
    ConstExpr& operator-=(const ConstExpr& o);
    ConstExpr& operator*=(const Rational& k);
    friend ConstExpr operator+(ConstExpr a, const ConstExpr& b) { return a += b; }
    friend ConstExpr operator-(ConstExpr a, const ConstExpr& b) { return a -= b; }
    friend ConstExpr operator*(ConstExpr a, const Rational& k) { return a *= k; }
    friend ConstExpr operator*(const Rational& k, ConstExpr a) { return a *= k; }
    ConstExpr operator-() const { return *this * Rational(-1); }
    bool operator==(const ConstExpr& o) const { return terms_ == o.terms_; }

    // Value with UNIT=1 and other symbols looked up; missing symbols throw.
    double evaluate(const std::map<std::string, double>& values) const;

    std::string str() const;

private:
    void add(const std::string& name, const Rational& c);
    Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const ConstExpr& c);

/// a(q) = (1-q)(24 zeta'(-1) - 1), stored expanded.
ConstExpr deligne_constant(long q);

struct BoundaryNames {
    std::string canonical = "Kt";
    std::vector<std::string> marks;  // empty: Pt1..PtN
    std::string r = "R", s = "S";
};

/// Signature (q, N) with generator names. A boundary context models one
/// non-separating node: genus q-1, marks P~_1..P~_N, R, S.
class CurveContext {
public:
    CurveContext(int genus, int n_marks);
    CurveContext(int genus, std::vector<std::string> marks, std::string canonical = "K");

    int genus() const { return genus_; }
    int n_marks() const { return static_cast<int>(marks_.size()); }
    const std::string& canonical() const { return canonical_; }
    const std::vector<std::string>& marks() const { return marks_; }
    const std::string& mark(int i) const;  // 1-based

    bool knows(const std::string& gen) const;
    bool is_mark(const std::string& gen) const;
    int mark_index(const std::string& gen) const;  // 1-based, throws if unknown
    int generator_degree(const std::string& gen) const;

    // 2q + N >= 3
    bool hyperbolic() const { return 2 * genus_ + n_marks() >= 3; }

    bool is_boundary() const { return parent_.has_value(); }
    CurveContext boundary(const BoundaryNames& names = {}) const;

    // For a boundary context: the images of the parent's generators.
    struct Parent {
        std::string canonical;
        std::vector<std::string> marks;
        std::string r, s;
    };
    const std::optional<Parent>& parent() const { return parent_; }

    bool operator==(const CurveContext& o) const {
        return genus_ == o.genus_ && canonical_ == o.canonical_ && marks_ == o.marks_;
    }

private:
    int genus_;
    std::string canonical_;
    std::vector<std::string> marks_;
    std::optional<Parent> parent_;
};

/// Formal tensor combination of generators with a constant metric twist
/// (the exponent c of O(e^c), squared-norm convention).
class LineExpr {
public:
    using Class = std::map<std::string, Rational, NaturalLess>;

    LineExpr() = default;
    static LineExpr trivial() { return {}; }
    static LineExpr generator(const std::string& name, const Rational& k = 1);
    static LineExpr twist(const ConstExpr& c);

    const Class& cls() const { return cls_; }
    const ConstExpr& twist() const { return twist_; }
    Rational exponent(const std::string& gen) const;

    bool is_trivial() const { return cls_.empty() && twist_.is_zero(); }
    bool integral() const;

    LineExpr& operator*=(const LineExpr& o);  // tensor
    friend LineExpr operator*(LineExpr a, const LineExpr& b) { return a *= b; }
    LineExpr dual() const;
    LineExpr pow(const Rational& k) const;
    LineExpr with_twist(const ConstExpr& c) const;

    bool operator==(const LineExpr& o) const { return cls_ == o.cls_ && twist_ == o.twist_; }

    std::string str() const;

private:
    Class cls_;
    ConstExpr twist_;
};

std::ostream& operator<<(std::ostream& os, const LineExpr& l);

// Context-checked operations.
void check_generators(const LineExpr& a, const CurveContext& ctx);
LineExpr tensor(const LineExpr& a, const LineExpr& b, const CurveContext& ctx);
LineExpr power(const LineExpr& a, const Rational& k);
LineExpr dual(const LineExpr& a);

// Degree allowing rational exponents; used internally by the pairing constant.
Rational rational_degree(const LineExpr& a, const CurveContext& ctx);
long degree(const LineExpr& a, const CurveContext& ctx);
long euler_char(const LineExpr& a, const CurveContext& ctx);

// K, O(P_i) and D = P_1 + ... + P_N of a context.
LineExpr canonical_bundle(const CurveContext& ctx);
LineExpr mark_bundle(const CurveContext& ctx, int i);
LineExpr mark_divisor(const CurveContext& ctx);

}  // namespace arakelov
