// One line per acceptance criterion. Exit status 0 only if every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "arakelov/pairing.hpp"
#include "arakelov/spectral.hpp"
#include "arakelov/suites.hpp"
#include "arakelov/torus.hpp"

using namespace arakelov;
namespace sp = arakelov::spectral;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool all_pass(const Report& r, Status allowed_extra = Status::Pass) {
    for (const auto& c : r.checks)
        if (c.status != Status::Pass && c.status != allowed_extra) return false;
    return true;
}

const CheckResult* find(const Report& r, const std::string& id) {
    for (const auto& c : r.checks)
        if (c.id == id) return &c;
    return nullptr;
}

// 1 -----------------------------------------------------------------------
Outcome mumford() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    Report r = run_builtin("mumford");
    double dt = seconds_since(t0);
    size_t inst = 0;
    for (const auto& c : r.checks) inst += c.instances;
    Report adj = run_builtin("mumford", {Regime::Adjunction, {}, {}});
    Report cus = run_builtin("mumford", {Regime::Cuspidal, {}, {}});
    o.require(r.ok() && r.count(Status::Flag) == 0, "every Mumford check passes");
    o.require(adj.ok() && cus.ok(), "both rule sets pass on their own");
    o.require(dt < 5, "runtime under 5 s");
    o.note(std::to_string(r.checks.size()) + " checks, " + std::to_string(inst) + " instances, n=1..6 q=2..5 N=0..4, " +
           fmt("%.2f s", dt));
    return o;
}

// 2 -----------------------------------------------------------------------
Outcome structural() {
    Outcome o;
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> e(-5, 5), qd(1, 6), nd(1, 4);
    int serre = 0, restr = 0;
    for (int t = 0; t < 200; ++t) {
        CurveContext ctx(qd(rng), nd(rng));
        LineExpr L = LineExpr::generator(ctx.canonical(), e(rng));
        for (const auto& m : ctx.marks()) L *= LineExpr::generator(m, e(rng));
        if (t % 2) L = L.with_twist(ConstExpr::symbol("f", frac(e(rng), 1 + std::abs(e(rng)))));
        RuleSet adj = RuleSet::adjunction();
        IdentityClaim s;
        s.lhs = {ClaimFactor::lambda(L)};
        s.rhs = {ClaimFactor::lambda(canonical_bundle(ctx) * L.dual())};
        serre += verify_identity(s, ctx, adj).equal;
        LineExpr P = LineExpr::generator(ctx.mark(1 + t % ctx.n_marks()));
        IdentityClaim f;
        f.lhs = {ClaimFactor::lambda(L)};
        f.rhs = {ClaimFactor::lambda(L * P.dual()), ClaimFactor::pair(L, P)};
        restr += verify_identity(f, ctx, adj).equal;
    }
    int confluent = 0;
    std::uniform_int_distribution<int> c(-6, 6);
    for (int t = 0; t < 100; ++t) {
        CurveContext ctx(2 + t % 3, 1 + t % 4);
        std::vector<std::string> g{ctx.canonical()};
        for (const auto& m : ctx.marks()) g.push_back(m);
        std::uniform_int_distribution<size_t> pick(0, g.size() - 1);
        PairingVector v;
        for (int i = 0; i < 8; ++i) v.add(g[pick(rng)], g[pick(rng)], frac(c(rng), 1 + std::abs(c(rng))));
        RuleSet rs = (t % 2) ? RuleSet::adjunction() : RuleSet::cuspidal();
        confluent += normalize_shuffled(v, ctx, rs, rng) == normalize(v, ctx, rs);
    }
    o.require(serre == 200, "Serre duality on 200 bundles");
    o.require(restr == 200, "restriction along D on 200 bundles");
    o.require(confluent == 100, "100 rewrite orders agree");
    o.note("Serre " + std::to_string(serre) + "/200, restriction " + std::to_string(restr) + "/200, confluence " +
           std::to_string(confluent) + "/100");
    return o;
}

// 3 -----------------------------------------------------------------------
Outcome boundary() {
    Outcome o;
    Report r = boundary_suite();
    for (const char* id : {"boundary.a", "boundary.b", "boundary.c", "boundary.tz", "boundary.d'"}) {
        const CheckResult* c = find(r, id);
        o.require(c && c->status == Status::Pass, std::string(id) + " passes");
    }
    const CheckResult* d = find(r, "boundary.d'");
    bool residual = false;
    if (d)
        for (const auto& n : d->notes) residual |= n.find("residual") != std::string::npos;
    o.require(residual, "residual of (d') reported");
    o.note("a, b, c exact; d' with the reported constant residual");
    return o;
}

// 4 -----------------------------------------------------------------------
Outcome chern() {
    Outcome o;
    Report r = chern_suite();
    const CheckResult* poly = find(r, "chern.lambda_n");
    const CheckResult* tz = find(r, "chern.tz");
    const CheckResult* sign = find(r, "chern.sign_n1");
    o.require(poly && poly->status == Status::Pass, "symbolic n polynomial");
    o.require(tz && tz->status == Status::Pass, "TZ rearrangement");
    o.require(sign && sign->status == Status::Flag, "n = 1 sign cross-check flags the inconsistency");
    if (sign)
        for (const auto& n : sign->notes)
            if (n.find("difference") != std::string::npos) o.note("flag: " + n);
    return o;
}

// 5 -----------------------------------------------------------------------
Outcome special() {
    Outcome o;
    // log A from the hyperfactorial, independent of the library's route
    const int n = 200;
    long double s = 0;
    for (int k = 2; k <= n; ++k) s += (long double)k * std::log((long double)k);
    long double N = n;
    double log_a = double(s - (N * N / 2 + N / 2 + 1.0L / 12) * std::log(N) + N * N / 4 - 1 / (720 * N * N) +
                          1 / (5040 * N * N * N * N));
    double zp = sp::zeta_prime_minus_one();
    o.require(std::abs(zp - (-0.1654211437)) < 1e-9, "zeta'(-1) = -0.1654211437");
    o.require(std::abs(zp - (1.0 / 12 - log_a)) < 1e-9, "zeta'(-1) against the hyperfactorial oracle");
    for (int k = 1; k <= 3; ++k) o.require(std::abs(sp::barnes_g(double(k)) - 1.0) < 1e-12, "G(k) = 1");
    o.require(std::abs(sp::barnes_g(4.0) - 2.0) < 1e-12, "G(4) = 2");
    double g_half = std::pow(2.0, 1.0 / 24) * std::exp(0.125) * std::pow(kPi, -0.25) * std::exp(-1.5 * log_a);
    double got = sp::barnes_g(0.5).real();
    o.require(std::abs(got - g_half) < 1e-9, "G(1/2)");
    o.note("zeta'(-1) = " + fmt("%.12f", zp) + ", G(1/2) = " + fmt("%.12f", got));
    return o;
}

// 6 -----------------------------------------------------------------------
Outcome zeta_pipeline() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> len(0.5, 4);
    std::uniform_int_distribution<long> mult(1, 4);
    double worst_rel = 0, worst_star = 0, slowest = 0;
    for (int t = 0; t < 20; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        sp::LengthSpectrum spec;
        for (int i = 0; i < 1 + t % 8; ++i) spec.entries.emplace_back(len(rng), mult(rng));
        spec.normalize();
        int q = 2 + t % 3, cusps = t % 3, k = 2 * q - 2 + cusps;
        cplx s(1.1 + 0.07 * t, 0.3 * (t % 4));
        cplx lhs = sp::det_delta(spec, s, q, cusps) * std::pow(sp::n_function(s), double(k));
        cplx z = sp::selberg_zeta(spec, s).value;
        worst_rel = std::max(worst_rel, std::abs(lhs - z) / std::abs(z));

        // (Z/N^k)' = Z/N^k (Z'/Z - k N'/N), N'/N(1) = -gamma
        double dlogz = 0;
        for (const auto& [l, m] : spec.entries)
            for (int j = 0; j <= 60; ++j) {
                double x = std::exp(-(1.0 + j) * l);
                dlogz += m * l * x / (1 - x);
            }
        double f1 = sp::det_delta(spec, 1.0, q, cusps).real();
        double want = f1 * (dlogz + k * sp::euler_gamma());
        double got = sp::det_star(spec, q, cusps).value;
        worst_star = std::max(worst_star, std::abs(got - want) / std::abs(want));
        slowest = std::max(slowest, seconds_since(t0));
    }
    sp::LengthSpectrum single;
    single.entries = {{2 * std::acosh(1.5), 1}};
    double oracle = 0;
    for (int m = 0; m <= 60; ++m) oracle += std::log1p(-std::exp(-(2.0 + m) * single.entries[0].first));
    double single_err = std::abs(sp::log_selberg_zeta(single, 2.0).value.real() - oracle);
    o.require(worst_rel < 1e-12, "defining relation to 1e-12");
    o.require(worst_star < 1e-6, "det_star against the analytic derivative to 1e-6");
    o.require(single_err < 1e-12, "single length against the log-sum oracle");
    o.require(slowest < 1, "under 1 s per case");
    o.note("relation " + fmt("%.1e", worst_rel) + ", det_star " + fmt("%.1e", worst_star) + ", single " +
           fmt("%.1e", single_err) + ", slowest case " + fmt("%.3f s", slowest));
    return o;
}

// 7 -----------------------------------------------------------------------
Outcome theta() {
    Outcome o;
    sp::PeriodMatrix Zi(Eigen::MatrixXcd::Constant(1, 1, cplx(0, 1)));
    cplx t = sp::theta(Zi, Eigen::VectorXcd::Zero(1)).value;
    o.require(std::abs(t - 1.0864348112) < 1e-8, "theta(i, 0) = 1.0864348112");

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    sp::TruncationParams p;
    p.lattice_radius = 9;
    double worst = 0;
    for (int q : {1, 2})
        for (int i = 0; i < 100; ++i) {
            Eigen::MatrixXd X(q, q), B(q, q);
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b) {
                    X(a, b) = u(rng);
                    B(a, b) = u(rng);
                }
            Eigen::MatrixXcd Z(q, q);
            Z.real() = (X + X.transpose()) / 2;
            Z.imag() = B.transpose() * B + 0.6 * Eigen::MatrixXd::Identity(q, q);
            sp::PeriodMatrix P(Z);
            Eigen::VectorXcd z(q);
            for (int a = 0; a < q; ++a) z(a) = cplx(u(rng), u(rng));
            double base = sp::theta_norm(P, z, p).value;
            int j = i % q;
            Eigen::VectorXcd z1 = z, z2 = z + P.Z.col(j);
            z1(j) += 1.0;
            worst = std::max({worst, std::abs(sp::theta_norm(P, z1, p).value - base) / std::max(1.0, base),
                              std::abs(sp::theta_norm(P, z2, p).value - base) / std::max(1.0, base)});
        }
    o.require(worst < 1e-9, "lattice invariance of the norm");

    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = cplx(0.1, 1.2);
    D(1, 1) = cplx(-0.3, 0.8);
    Eigen::VectorXcd z(2);
    z << cplx(0.2, 0.1), cplx(-0.4, 0.05);
    cplx full = sp::theta(sp::PeriodMatrix(D), z).value;
    cplx a = sp::theta(sp::PeriodMatrix(D.block(0, 0, 1, 1)), z.segment(0, 1)).value;
    cplx b = sp::theta(sp::PeriodMatrix(D.block(1, 1, 1, 1)), z.segment(1, 1)).value;
    double fact = std::abs(full - a * b);
    o.require(fact < 1e-12, "diagonal factorization");
    o.note("theta(i,0) = " + fmt("%.12f", t.real()) + ", invariance " + fmt("%.1e", worst) + ", factorization " +
           fmt("%.1e", fact));
    return o;
}

// 8 -----------------------------------------------------------------------
Outcome eisenstein() {
    Outcome o;
    sp::FuchsianGroup mod = sp::FuchsianGroup::parse_json(R"({"generators": [[[0,-1],[1,0]], [[1,1],[0,1]]]})");
    sp::Mat2 id = sp::Mat2::Identity();
    const double zeta3 = 1.2020569031595942854, zeta4 = std::pow(kPi, 4) / 90;
    double target = 9 + (kPi / 2) * zeta3 / zeta4 / 3;
    sp::TruncationParams p;
    p.coset_depth = 12;
    double e = sp::eisenstein(mod, id, 2.0, cplx(0, 3), p).value.real();
    double rel = std::abs(e - target) / target;
    o.require(rel < 0.05, "constant term check within 5%");

    int configs = 0;
    bool monotone = true;
    for (double s : {1.5, 2.0, 3.0})
        for (cplx z : {cplx(0, 3), cplx(0.1, 1.3), cplx(-0.4, 0.9)}) {
            ++configs;
            double prev = 0;
            for (int d = 0; d <= 12; ++d) {
                p.coset_depth = d;
                double v = sp::eisenstein(mod, id, s, z, p).value.real();
                if (v < prev) monotone = false;
                prev = v;
            }
        }
    o.require(monotone, "monotone in depth");
    o.note("E(3i, 2) = " + fmt("%.5f", e) + " against " + fmt("%.5f", target) + " (" + fmt("%.2f%%", 100 * rel) +
           "), monotone on " + std::to_string(configs) + " configurations");
    return o;
}

// 9 -----------------------------------------------------------------------
Outcome torus_lab() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    torus::TorusOptions opt;
    opt.n = 128;
    Report flat = torus::torus_check(torus::Torus({0, 1}), opt);
    opt.bump = true;
    Report bump = torus::torus_check(torus::Torus({0, 1}), opt);
    double dt = seconds_since(t0);
    o.require(all_pass(flat, Status::Flag), "flat omega");
    o.require(all_pass(bump, Status::Flag), "bump omega");
    o.require(dt < 10, "runtime under 10 s");
    for (const Report* r : {&flat, &bump})
        for (const auto& c : r->checks)
            if (c.status == Status::Fail) o.note(c.id + " " + (c.failures.empty() ? "" : c.failures[0].diff));
    const CheckResult* ord = find(bump, "torus.order");
    std::string orders;
    if (ord)
        for (const auto& n : ord->notes) orders += (orders.empty() ? "" : ", ") + n;
    o.note("bump orders " + orders + ", " + fmt("%.2f s", dt));
    return o;
}

// 10 ----------------------------------------------------------------------
Outcome documented_limits() {
    Outcome o;
    std::ifstream f(ARTIFACT_README);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    o.require(!text.empty(), "README readable");
    for (const char* item : {"Quillen", "Faltings", "Weil-Petersson", "constancy", "degeneration"})
        o.require(text.find(item) != std::string::npos, std::string("README names ") + item);
    o.note("out-of-scope items are listed in the README");
    return o;
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Row> rows{{1, "mumford suite", mumford},          {2, "structural consequences", structural},
                          {3, "boundary factorization", boundary}, {4, "chern bookkeeping", chern},
                          {5, "special functions", special},       {6, "zeta pipeline", zeta_pipeline},
                          {7, "theta", theta},                     {8, "eisenstein", eisenstein},
                          {9, "torus lab", torus_lab},             {10, "documented limits", documented_limits}};
    int failed = 0;
    for (const auto& r : rows) {
        Outcome o;
        try {
            o = r.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("threw: ") + e.what();
        }
        failed += !o.ok;
        std::printf("criterion %2d %s  %s: %s\n", r.id, o.ok ? "PASS" : "FAIL", r.name, o.detail.c_str());
    }
    std::printf("%d of %zu criteria pass\n", int(rows.size()) - failed, rows.size());
    return failed == 0 ? 0 : 1;
}
