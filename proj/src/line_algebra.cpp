#include "arakelov/line_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace arakelov {

std::string to_string(const Rational& r) { return r.get_str(); }

bool NaturalLess::operator()(const std::string& a, const std::string& b) const {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            // strip leading zeros, then longer run is larger
            size_t is = i, js = j;
            while (is + 1 < ie && a[is] == '0') ++is;
            while (js + 1 < je && b[js] == '0') ++js;
            if (ie - is != je - js) return ie - is < je - js;
            int c = a.compare(is, ie - is, b, js, je - js);
            if (c != 0) return c < 0;
            if (ie - i != je - j) return ie - i < je - j;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

std::string sym::beta(int i) { return "BETA" + std::to_string(i); }

// ---------------------------------------------------------------- ConstExpr

ConstExpr ConstExpr::symbol(const std::string& name, const Rational& c) {
    ConstExpr e;
    e.add(name, c);
    return e;
}

Rational ConstExpr::coeff(const std::string& name) const {
    auto it = terms_.find(name);
    return it == terms_.end() ? Rational(0) : it->second;
}

void ConstExpr::add(const std::string& name, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(name, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

ConstExpr& ConstExpr::operator+=(const ConstExpr& o) {
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
}

ConstExpr& ConstExpr::operator-=(const ConstExpr& o) {
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
}

ConstExpr& ConstExpr::operator*=(const Rational& k) {
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [_, v] : terms_) v *= k;
    return *this;
}

double ConstExpr::evaluate(const std::map<std::string, double>& values) const {
    double s = 0;
    for (const auto& [k, v] : terms_) {
        double x;
        if (k == sym::UNIT) {
            x = 1.0;
        } else {
            auto it = values.find(k);
            if (it == values.end()) throw DomainError("no value for constant symbol " + k);
            x = it->second;
        }
        s += v.get_d() * x;
    }
    return s;
}

namespace {

void put_term(std::ostringstream& os, bool first, const Rational& c, const std::string& name,
              bool is_number) {
    Rational a = abs(c);
    if (first) {
        if (c < 0) os << "-";
    } else {
        os << (c < 0 ? " - " : " + ");
    }
    if (is_number) {
        os << to_string(a);
    } else if (a == 1) {
        os << name;
    } else {
        os << to_string(a) << "*" << name;
    }
}

}  // namespace

std::string ConstExpr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    auto unit = terms_.find(sym::UNIT);
    if (unit != terms_.end()) {
        put_term(os, true, unit->second, "", true);
        first = false;
    }
    for (const auto& [k, v] : terms_) {
        if (k == sym::UNIT) continue;
        put_term(os, first, v, k, false);
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ConstExpr& c) { return os << c.str(); }

ConstExpr deligne_constant(long q) {
    if (q < 0) throw DomainError("genus must be non-negative");
    return ConstExpr::symbol(sym::ZETA_PRIME, Rational(24 * (1 - q))) +
           ConstExpr::number(Rational(q - 1));
}

// ------------------------------------------------------------- CurveContext

CurveContext::CurveContext(int genus, int n_marks) : genus_(genus), canonical_("K") {
    if (genus < 0 || n_marks < 0) throw ContextError("signature must be non-negative");
    for (int i = 1; i <= n_marks; ++i) marks_.push_back("P" + std::to_string(i));
}

CurveContext::CurveContext(int genus, std::vector<std::string> marks, std::string canonical)
    : genus_(genus), canonical_(std::move(canonical)), marks_(std::move(marks)) {
    if (genus < 0) throw ContextError("genus must be non-negative");
    std::set<std::string> seen{canonical_};
    for (const auto& m : marks_) {
        if (m.empty()) throw ContextError("empty mark name");
        if (!seen.insert(m).second) throw ContextError("duplicate generator name " + m);
    }
}

const std::string& CurveContext::mark(int i) const {
    if (i < 1 || i > n_marks()) throw ContextError("mark index " + std::to_string(i) + " out of range");
    return marks_[i - 1];
}

bool CurveContext::is_mark(const std::string& gen) const {
    return std::find(marks_.begin(), marks_.end(), gen) != marks_.end();
}

bool CurveContext::knows(const std::string& gen) const { return gen == canonical_ || is_mark(gen); }

int CurveContext::mark_index(const std::string& gen) const {
    auto it = std::find(marks_.begin(), marks_.end(), gen);
    if (it == marks_.end()) throw ContextError("unknown mark " + gen);
    return static_cast<int>(it - marks_.begin()) + 1;
}

int CurveContext::generator_degree(const std::string& gen) const {
    if (gen == canonical_) return 2 * genus_ - 2;
    if (is_mark(gen)) return 1;
    throw ContextError("generator " + gen + " unknown to the context");
}

CurveContext CurveContext::boundary(const BoundaryNames& names) const {
    if (genus_ < 1) throw ContextError("a non-separating node needs genus >= 1");
    std::vector<std::string> tm = names.marks;
    if (tm.empty()) {
        for (int i = 1; i <= n_marks(); ++i) tm.push_back("Pt" + std::to_string(i));
    } else if (static_cast<int>(tm.size()) != n_marks()) {
        throw ContextError("boundary mark names do not match the number of marks");
    }
    std::vector<std::string> all = tm;
    all.push_back(names.r);
    all.push_back(names.s);
    CurveContext b(genus_ - 1, all, names.canonical);
    b.parent_ = Parent{names.canonical, tm, names.r, names.s};
    return b;
}

// ----------------------------------------------------------------- LineExpr

LineExpr LineExpr::generator(const std::string& name, const Rational& k) {
    LineExpr l;
    if (k != 0) l.cls_[name] = k;
    return l;
}

LineExpr LineExpr::twist(const ConstExpr& c) {
    LineExpr l;
    l.twist_ = c;
    return l;
}

Rational LineExpr::exponent(const std::string& gen) const {
    auto it = cls_.find(gen);
    return it == cls_.end() ? Rational(0) : it->second;
}

bool LineExpr::integral() const {
    return std::all_of(cls_.begin(), cls_.end(),
                       [](const auto& kv) { return kv.second.get_den() == 1; });
}

LineExpr& LineExpr::operator*=(const LineExpr& o) {
    for (const auto& [g, k] : o.cls_) {
        auto [it, inserted] = cls_.try_emplace(g, k);
        if (!inserted) {
            it->second += k;
            if (it->second == 0) cls_.erase(it);
        }
    }
    twist_ += o.twist_;
    return *this;
}

LineExpr LineExpr::dual() const { return pow(-1); }

LineExpr LineExpr::pow(const Rational& k) const {
    LineExpr r;
    if (k == 0) return r;
    for (const auto& [g, e] : cls_) r.cls_[g] = e * k;
    r.twist_ = twist_ * k;
    return r;
}

LineExpr LineExpr::with_twist(const ConstExpr& c) const {
    LineExpr r = *this;
    r.twist_ += c;
    return r;
}

std::string LineExpr::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, k] : cls_) {
        if (!first) os << " * ";
        first = false;
        os << g;
        if (k == 1) continue;
        if (k.get_den() == 1)
            os << "^" << to_string(k);
        else
            os << "^(" << to_string(k) << ")";
    }
    if (!twist_.is_zero()) {
        if (!first) os << " * ";
        first = false;
        os << "e^{" << twist_.str() << "}";
    }
    if (first) os << "O";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LineExpr& l) { return os << l.str(); }

void check_generators(const LineExpr& a, const CurveContext& ctx) {
    for (const auto& [g, _] : a.cls())
        if (!ctx.knows(g)) throw ContextError("generator " + g + " unknown to the context");
}

LineExpr tensor(const LineExpr& a, const LineExpr& b, const CurveContext& ctx) {
    check_generators(a, ctx);
    check_generators(b, ctx);
    return a * b;
}

LineExpr power(const LineExpr& a, const Rational& k) { return a.pow(k); }
LineExpr dual(const LineExpr& a) { return a.dual(); }

Rational rational_degree(const LineExpr& a, const CurveContext& ctx) {
    Rational d = 0;
    for (const auto& [g, k] : a.cls()) d += k * ctx.generator_degree(g);
    return d;
}

long degree(const LineExpr& a, const CurveContext& ctx) {
    if (!a.integral()) throw NonIntegralDegree("degree of a line with rational exponents: " + a.str());
    return rational_degree(a, ctx).get_num().get_si();
}

long euler_char(const LineExpr& a, const CurveContext& ctx) { return degree(a, ctx) - ctx.genus() + 1; }

LineExpr canonical_bundle(const CurveContext& ctx) { return LineExpr::generator(ctx.canonical()); }

LineExpr mark_bundle(const CurveContext& ctx, int i) { return LineExpr::generator(ctx.mark(i)); }

LineExpr mark_divisor(const CurveContext& ctx) {
    LineExpr d;
    for (const auto& m : ctx.marks()) d *= LineExpr::generator(m);
    return d;
}

}  // namespace arakelov
