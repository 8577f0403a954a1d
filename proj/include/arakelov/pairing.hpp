#pragma once

#include <array>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "arakelov/line_algebra.hpp"

namespace arakelov {

using GenPair = std::pair<std::string, std::string>;

struct PairLess {
    bool operator()(const GenPair& a, const GenPair& b) const {
        NaturalLess lt;
        if (a.first != b.first) return lt(a.first, b.first);
        return lt(a.second, b.second);
    }
};

/// Rational combination of pairings <g,h> of primitive generators plus a
/// constant ledger. Keys are ordered so <g,h> = <h,g> by construction.
class PairingVector {
public:
    using Coeffs = std::map<GenPair, Rational, PairLess>;

    static GenPair key(const std::string& a, const std::string& b);

    void add(const std::string& a, const std::string& b, const Rational& c);
    void add_constant(const ConstExpr& c) { constant_ += c; }
    Rational coeff(const std::string& a, const std::string& b) const;

    const Coeffs& coeffs() const { return coeffs_; }
    const ConstExpr& constant() const { return constant_; }
    bool is_zero() const { return coeffs_.empty() && constant_.is_zero(); }

    PairingVector& operator+=(const PairingVector& o);
    PairingVector& operator-=(const PairingVector& o);
    PairingVector& operator*=(const Rational& k);
    friend PairingVector operator+(PairingVector a, const PairingVector& b) { return a += b; }
    friend PairingVector operator-(PairingVector a, const PairingVector& b) { return a -= b; }
    friend PairingVector operator*(PairingVector a, const Rational& k) { return a *= k; }
    friend PairingVector operator*(const Rational& k, PairingVector a) { return a *= k; }
    bool operator==(const PairingVector& o) const {
        return coeffs_ == o.coeffs_ && constant_ == o.constant_;
    }

    std::string str() const;

private:
    Coeffs coeffs_;
    ConstExpr constant_;
};

std::ostream& operator<<(std::ostream& os, const PairingVector& v);

enum class Regime { Adjunction, Cuspidal };

/// Which rewrite rules and which Delta block are in force.
///
/// Adjunction: <K,P_i> -> -<P_i,P_i>, Delta_1 = sum <P_k,P_k>, Delta_2 = sum_{i<j} <P_i,P_j>.
/// Cuspidal: no adjunction; K and P_i carry constant twists alpha, beta_i and
/// Delta_1, Delta_2 are the twisted pairings <K,D>^-1 and <K+D,D>^(1/2).
class RuleSet {
public:
    static RuleSet adjunction();
    static RuleSet cuspidal();  // symbolic ALPHA, BETA<i>
    static RuleSet cuspidal(ConstExpr alpha, std::vector<ConstExpr> betas);

    Regime regime() const { return regime_; }
    bool adjunction_enabled() const { return regime_ == Regime::Adjunction; }
    std::string name() const { return adjunction_enabled() ? "adjunction" : "cuspidal"; }

    // <s_i, s_j> = O for distinct sections; only the boundary bookkeeping turns this on.
    bool disjoint_sections = false;

    ConstExpr alpha() const;
    ConstExpr beta(int i) const;  // 1-based

    // Twist the primitive generators of a plain expression by alpha / beta_i.
    LineExpr decorate(const LineExpr& plain, const CurveContext& ctx) const;
    LineExpr canonical(const CurveContext& ctx) const;

    void validate(const CurveContext& ctx) const;

private:
    Regime regime_ = Regime::Adjunction;
    bool symbolic_ = true;
    ConstExpr alpha_;
    std::vector<ConstExpr> betas_;
};

PairingVector deligne_pair(const LineExpr& a, const LineExpr& b, const CurveContext& ctx);

/// 12*lambda(L) = 6<L,L> - 6<L,K'> + <K',K'> + a(q), with K' the (possibly twisted) canonical line.
PairingVector lambda_expand(const LineExpr& L, const CurveContext& ctx);
PairingVector lambda_expand(const LineExpr& L, const CurveContext& ctx, const LineExpr& canonical);

PairingVector normalize(const PairingVector& v, const CurveContext& ctx, const RuleSet& rules);

// Same result reached by applying orientation, merge and rewrite steps in a
// random order to a randomly split and re-oriented copy of v.
PairingVector normalize_shuffled(const PairingVector& v, const CurveContext& ctx, const RuleSet& rules,
                                 std::mt19937_64& rng);

PairingVector delta_bundle(int kind, const CurveContext& ctx, const RuleSet& rules);

LineExpr lambda_n(long n, const CurveContext& ctx);
LineExpr lambda_n(long n, const CurveContext& ctx, const RuleSet& rules);

struct ClaimFactor {
    enum class Kind { Lambda, LambdaN, Pairing, Delta, Twist };
    Kind kind = Kind::Twist;
    LineExpr a, b;      // plain bundles; the rule set decorates them
    long index = 0;     // n of lambda_n, kind of Delta
    ConstExpr constant;
    Rational exponent = 1;

    static ClaimFactor lambda(const LineExpr& L, const Rational& e = 1);
    static ClaimFactor lambda_n(long n, const Rational& e = 1);
    static ClaimFactor pair(const LineExpr& a, const LineExpr& b, const Rational& e = 1);
    static ClaimFactor delta(int kind, const Rational& e = 1);
    static ClaimFactor twist(const ConstExpr& c, const Rational& e = 1);
};

struct IdentityClaim {
    std::vector<ClaimFactor> lhs, rhs;
};

struct Verdict {
    bool equal;
    PairingVector diff;  // lhs - rhs after normalization, natural units
};

// Natural units: lambda contributes lambda_expand / 12.
PairingVector evaluate_side(const std::vector<ClaimFactor>& side, const CurveContext& ctx,
                            const RuleSet& rules);
Verdict verify_identity(const IdentityClaim& claim, const CurveContext& ctx, const RuleSet& rules);

PairingVector restriction_line(const LineExpr& L, const std::string& mark, const CurveContext& ctx,
                               const RuleSet& rules);

/// K -> Kt + R + S, P_i -> Pt_i, re-expanded in the boundary context.
LineExpr boundary_substitute(const LineExpr& L, const CurveContext& ctx, const CurveContext& bctx);
PairingVector boundary_substitute(const PairingVector& v, const CurveContext& ctx,
                                  const CurveContext& bctx);
PairingVector boundary_substitute(const PairingVector& v, const CurveContext& ctx);

// Separating node (q1,d1) | (q2,d2): the degree-ratio predicate d1(2q2-1) = d2(2q1-1).
bool separating_degree_condition(long d1, long q1, long d2, long q2);

// ---------------------------------------------------------- Chern bookkeeping

namespace form {
inline const std::string WP = "omega_WP/pi^2";
inline const std::string TZ = "omega_TZ";
inline const std::string C1_DELTA1 = "c1(Delta1)";
inline const std::string C1_DELTA2 = "c1(Delta2)";
}  // namespace form

struct ChernBlock {
    std::string label;
    PairingVector block;  // normalized
    ConstExpr image;      // formal 2-form combination
};
using ChernAssignment = std::vector<ChernBlock>;

// Delta0 -> omega_WP/pi^2, Delta1 -> c1(Delta1), Delta2 -> c1(Delta2).
ChernAssignment basic_chern_assignment(const CurveContext& ctx, const RuleSet& rules);
// Delta0 -> omega_WP/pi^2, Delta1 - 2 Delta2 -> (4/3) omega_TZ, Delta2 -> c1(Delta2).
ChernAssignment tz_chern_assignment(const CurveContext& ctx, const RuleSet& rules);

// Writes v as a combination of the blocks (exact elimination) and pushes the
// coefficients onto the images. Constants map to zero.
ConstExpr chern_form(const PairingVector& v, const ChernAssignment& assignment, const CurveContext& ctx,
                     const RuleSet& rules);

/// Quadratic in n, one per form symbol.
struct ChernPolynomial {
    std::map<std::string, std::array<Rational, 3>, NaturalLess> coeffs;  // c0 + c1 n + c2 n^2
    ConstExpr at(long n) const;
    std::string str() const;
};

// 12 c1(lambda_n) as a polynomial in n, interpolated on n = 1..3 and checked on
// n = 4..validate_to. Throws if the check fails.
ChernPolynomial chern_lambda_n(const CurveContext& ctx, const RuleSet& rules, const ChernAssignment& a,
                               long validate_to = 8);

}  // namespace arakelov
