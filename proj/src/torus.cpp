#include "arakelov/torus.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include "arakelov/parallel.hpp"

namespace arakelov::torus {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
// Ewald terms below e^-40 are dropped.
constexpr double kEwaldCut = 40;

double e1(double x) { return -std::expint(-x); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// wrap to [-1/2, 1/2)
double wrap_half(double x) { return x - std::floor(x + 0.5); }

void lattice_coords(const Torus& t, cplx z, double& u, double& v) {
    v = z.imag() / t.tau.imag();
    u = z.real() - v * t.tau.real();
}

// Sum over dual modes (j, k) != 0 of (4 pi / A) e^{-A|kappa|^2 / 4 pi} / |kappa|^2 cos 2 pi (j u + k v)
double ewald_fourier(const Torus& t, double u, double v) {
    const double A = t.area(), ti = t.tau.imag(), tr = t.tau.real();
    const double R = std::sqrt(kEwaldCut * ti / kPi);
    const int J = static_cast<int>(std::ceil(R / ti));
    double acc = 0;
    for (int j = 0; j <= J; ++j) {
        int k0 = static_cast<int>(std::floor(j * tr - R)), k1 = static_cast<int>(std::ceil(j * tr + R));
        for (int k = k0; k <= k1; ++k) {
            if (j == 0 && k <= 0) continue;  // (j, k) and (-j, -k) together
            double n2 = std::norm(double(j) * t.tau - double(k));
            double kappa2 = 4 * kPi * kPi * n2 / (ti * ti);
            double w = A * kappa2 / (4 * kPi);
            if (w > kEwaldCut) continue;
            acc += 2 * (4 * kPi / A) * std::exp(-w) / kappa2 * std::cos(2 * kPi * (j * u + k * v));
        }
    }
    return acc;
}

// Sum over lattice points lambda of E1(pi |z - lambda|^2 / A), skipping lambda = 0 when skip_zero.
double ewald_real(const Torus& t, cplx z, bool skip_zero) {
    const double A = t.area(), ti = t.tau.imag(), tr = t.tau.real();
    const double R = std::sqrt(kEwaldCut * A / kPi);
    const int K = static_cast<int>(std::ceil((R + std::abs(z.imag())) / ti));
    double acc = 0;
    for (int k = -K; k <= K; ++k) {
        double x = z.real() - k * tr, y = z.imag() - k * ti;
        if (std::abs(y) > R) continue;
        int m0 = static_cast<int>(std::floor(x - R)), m1 = static_cast<int>(std::ceil(x + R));
        for (int m = m0; m <= m1; ++m) {
            if (skip_zero && m == 0 && k == 0) continue;
            double r2 = (x - m) * (x - m) + y * y;
            double a = kPi * r2 / A;
            if (a > kEwaldCut) continue;
            acc += e1(a);
        }
    }
    return acc;
}

void fft2(std::vector<cplx>& a, int n, bool inverse) {
    Eigen::FFT<double> fft;
    std::vector<cplx> in(n), out(n);
    for (int pass = 0; pass < 2; ++pass) {
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) in[c] = pass == 0 ? a[size_t(r) * n + c] : a[size_t(c) * n + r];
            if (inverse)
                fft.inv(out, in);
            else
                fft.fwd(out, in);
            for (int c = 0; c < n; ++c) (pass == 0 ? a[size_t(r) * n + c] : a[size_t(c) * n + r]) = out[c];
        }
    }
}

// Zero-mean solution of Laplacian(w) / 4 pi = f; f must have zero mean.
GridField poisson(const Torus& t, const GridField& f) {
    const int n = f.n;
    std::vector<cplx> a(f.values.begin(), f.values.end());
    fft2(a, n, false);
    const double ti = t.tau.imag();
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            int j = p < n / 2 ? p : p - n, k = q < n / 2 ? q : q - n;
            cplx& c = a[size_t(p) * n + q];
            if ((j == 0 && k == 0) || j == -n / 2 || k == -n / 2) {
                c = 0;
                continue;
            }
            double kappa2 = 4 * kPi * kPi * std::norm(double(j) * t.tau - double(k)) / (ti * ti);
            c *= -4 * kPi / kappa2;
        }
    fft2(a, n, true);  // Eigen's inverse is normalized
    GridField w(n);
    for (size_t i = 0; i < a.size(); ++i) w.values[i] = a[i].real();
    return w;
}

// index offset of (i, j) from p, wrapped to [-n/2, n/2)
int wrap_index(int d, int n) {
    d = ((d % n) + n) % n;
    return d >= n / 2 ? d - n : d;
}

bool in_mask(GridPoint p, int i, int j, int n) {
    return std::abs(wrap_index(i - p.i, n)) <= 2 && std::abs(wrap_index(j - p.j, n)) <= 2;
}

void check_same_n(const GridField& a, const GridField& b, const char* what) {
    if (a.n != b.n) throw ShapeMismatch(std::string(what) + ": grid sizes differ (" + std::to_string(a.n) + " vs " +
                                        std::to_string(b.n) + ")");
}

// integral of -log|z|^2 over the cell spanned by (1/n, tau/n) centred at 0,
// as four triangles with apex 0: |p1 x p2| / 2 * int_0^1 (1 - log|e(s)|^2) ds
double cell_log_integral(const Torus& t, int n) {
    static const double x[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    cplx a = 0.5 / double(n), b = 0.5 * t.tau / double(n);
    cplx corners[4] = {a + b, -a + b, -a - b, a - b};
    double total = 0;
    for (int c = 0; c < 4; ++c) {
        cplx p1 = corners[c], p2 = corners[(c + 1) % 4];
        double cross = std::abs(p1.real() * p2.imag() - p1.imag() * p2.real());
        // split the edge in halves so the integrand is smooth enough for 8 nodes
        double s = 0;
        for (int half = 0; half < 2; ++half)
            for (int g = 0; g < 8; ++g) {
                double tt = 0.25 * (x[g] + 1) + 0.5 * half;
                cplx e = p1 + tt * (p2 - p1);
                s += 0.25 * w[g] * (1 - std::log(std::norm(e)));
            }
        total += cross / 2 * s;
    }
    return total;
}

}  // namespace

Torus::Torus(cplx t) : tau(t) {
    if (!(t.imag() > 0) || !std::isfinite(t.real()) || !std::isfinite(t.imag()))
        throw DomainError("tau must have positive imaginary part");
}

GridField::GridField(int n_, double fill) : n(n_), values(static_cast<size_t>(n_) * n_, fill) {}

double GridField::integral(const Torus& t) const {
    double s = 0;
    for (double x : values) s += x;
    return s * t.area() / (double(n) * n);
}

double GridField::mean() const {
    double s = 0;
    for (double x : values) s += x;
    return s / (double(n) * n);
}

void GridField::write_binary(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigurationError("cannot write " + path);
    uint32_t header[4] = {0, static_cast<uint32_t>(n), 0, 0};
    std::memcpy(header, "GFLD", 4);
    f.write(reinterpret_cast<const char*>(header), sizeof header);
    f.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
}

GridField GridField::read_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigurationError("cannot read " + path);
    uint32_t header[4];
    if (!f.read(reinterpret_cast<char*>(header), sizeof header) || std::memcmp(header, "GFLD", 4) != 0)
        throw ConfigurationError(path + ": not a GFLD field");
    GridField g(static_cast<int>(header[1]));
    if (!f.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double))))
        throw ShapeMismatch(path + ": truncated field data");
    return g;
}

void GridField::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigurationError("cannot write " + path);
    f << "i,j,value\n";
    char buf[64];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j, at(i, j));
            f << buf;
        }
}

void check_resolution(int n) {
    if (n < 16 || (n & (n - 1)) != 0) throw ConfigurationError("grid size must be a power of two >= 16, got " + std::to_string(n));
}

double green_kernel(const Torus& t, cplx d) {
    double u, v;
    lattice_coords(t, d, u, v);
    u = wrap_half(u);
    v = wrap_half(v);
    cplx z = t.point(u, v);
    if (std::norm(z) == 0) throw SingularityError("green kernel evaluated at its pole");
    return ewald_real(t, z, false) - 1 + ewald_fourier(t, u, v);
}

double green_regular(const Torus& t) {
    // E1(a r^2) + log r^2 -> -gamma - log a with a = pi / A
    return ewald_real(t, 0, true) - kEulerGamma - std::log(kPi / t.area()) - 1 + ewald_fourier(t, 0, 0);
}

GridPoint grid_point(double u, double v, int n) {
    double a = u * n, b = v * n;
    double ra = std::round(a), rb = std::round(b);
    if (std::abs(a - ra) > 1e-9 || std::abs(b - rb) > 1e-9)
        throw DomainError("point (" + std::to_string(u) + ", " + std::to_string(v) + ") is not on the grid");
    long i = static_cast<long>(ra) % n, j = static_cast<long>(rb) % n;
    return {static_cast<int>((i + n) % n), static_cast<int>((j + n) % n)};
}

GreenField flat_green(const Torus& t, GridPoint p, int n) {
    check_resolution(n);
    if (p.i < 0 || p.j < 0 || p.i >= n || p.j >= n) throw DomainError("source point is off the grid");
    GreenField out{t, p, GridField(n), green_regular(t)};
    parallel_chunks(static_cast<size_t>(n), [&](size_t row) {
        int i = static_cast<int>(row);
        for (int j = 0; j < n; ++j) {
            if (i == p.i && j == p.j) {
                out.g.at(i, j) = NAN;
                continue;
            }
            out.g.at(i, j) = green_kernel(t, t.point(double(i - p.i) / n, double(j - p.j) / n));
        }
    });
    return out;
}

GridField beta_from_omega(const Torus& t, const GridField& omega2, int n) {
    check_resolution(n);
    if (omega2.n != n) throw ShapeMismatch("omega density has the wrong grid size");
    for (double x : omega2.values)
        if (!(x >= 0)) throw DomainError("omega density must be nonnegative");
    double mass = omega2.integral(t);
    if (std::abs(mass - 1) > 1e-10) throw DomainError("omega is not normalized (mass " + std::to_string(mass) + ")");

    GridField f(n);
    for (size_t i = 0; i < f.values.size(); ++i) f.values[i] = omega2.values[i] - 1 / t.area();
    GridField b = poisson(t, f);
    // int (b + c)(omega + omega_can) = 0
    double with_omega = 0;
    for (size_t i = 0; i < b.values.size(); ++i) with_omega += b.values[i] * omega2.values[i];
    with_omega *= t.area() / (double(n) * n);
    double c = -(with_omega + b.mean()) / 2;
    for (double& x : b.values) x += c;
    return b;
}

GreenField transfer_green(const GreenField& g, const GridField& beta) {
    check_same_n(g.g, beta, "transfer_green");
    GreenField out = g;
    double bp = beta.at(g.p.i, g.p.j);
    for (size_t i = 0; i < out.g.values.size(); ++i) out.g.values[i] += bp + beta.values[i];
    out.regular += 2 * bp;
    return out;
}

double arakelov_metric_consistency(const GreenField& g, const GreenField& gw, const GridField& beta, GridPoint q) {
    check_same_n(g.g, beta, "metric consistency");
    check_same_n(gw.g, beta, "metric consistency");
    const int n = beta.n;
    if (q.i == g.p.i && q.j == g.p.j) throw DomainError("metric consistency needs P != Q");
    if (in_mask(g.p, q.i, q.j, n)) throw DomainError("Q lies inside the mask around P");
    double lhs = -gw.g.at(q.i, q.j) + beta.at(g.p.i, g.p.j);
    double rhs = -g.g.at(q.i, q.j) - beta.at(q.i, q.j);
    return std::abs(lhs - rhs);
}

GridField flat_density(const Torus& t, int n) { return GridField(n, 1 / t.area()); }

double bump_potential(double u, double v, double amp) {
    return amp * std::exp(std::cos(2 * kPi * (u - 0.5)) + std::cos(2 * kPi * (v - 0.5)) - 2);
}

GridField bump_field(int n, double amp) {
    GridField f(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.at(i, j) = bump_potential(double(i) / n, double(j) / n, amp);
    return f;
}

GridField bump_density(const Torus& t, int n, double amp) {
    const double tr = t.tau.real(), ti = t.tau.imag();
    const double cuu = 1 + tr * tr / (ti * ti), cuv = -2 * tr / (ti * ti), cvv = 1 / (ti * ti);
    GridField f(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double u = double(i) / n, v = double(j) / n;
            double phi = bump_potential(u, v, amp);
            double su = -2 * kPi * std::sin(2 * kPi * (u - 0.5)), sv = -2 * kPi * std::sin(2 * kPi * (v - 0.5));
            double suu = -4 * kPi * kPi * std::cos(2 * kPi * (u - 0.5)), svv = -4 * kPi * kPi * std::cos(2 * kPi * (v - 0.5));
            double lap = phi * (cuu * (su * su + suu) + cuv * su * sv + cvv * (sv * sv + svv));
            f.at(i, j) = 1 / t.area() + lap / (4 * kPi);
        }
    return f;
}

AxiomResiduals check_green_axioms(const GreenField& gf, const GridField& omega2, const GridField& beta) {
    const GridField& g = gf.g;
    check_same_n(g, omega2, "check_green_axioms");
    check_same_n(g, beta, "check_green_axioms");
    const int n = g.n;
    const Torus& t = gf.torus;
    const GridPoint p = gf.p;
    const double tr = t.tau.real(), ti = t.tau.imag();
    const double cuu = 1 + tr * tr / (ti * ti), cuv = -2 * tr / (ti * ti), cvv = 1 / (ti * ti);
    const double hn = n;

    std::vector<double> curv(n, 0), smooth(n, 0);
    parallel_chunks(static_cast<size_t>(n), [&](size_t row) {
        int i = static_cast<int>(row);
        for (int j = 0; j < n; ++j) {
            if (in_mask(p, i, j, n)) continue;
            double du = double(wrap_index(i - p.i, n)) / n, dv = double(wrap_index(j - p.j, n)) / n;
            // smooth part on the stencil, unwrapped around (i, j)
            auto u = [&](int a, int b) {
                cplx d = t.point(du + double(a) / n, dv + double(b) / n);
                double s = g.wrap(i + a, j + b);
                for (int m = -1; m <= 1; ++m)
                    for (int k = -1; k <= 1; ++k) s += std::log(std::norm(d - double(m) - double(k) * t.tau));
                return s;
            };
            double c = u(0, 0);
            double uuu = (u(1, 0) - 2 * c + u(-1, 0)) * hn * hn;
            double uvv = (u(0, 1) - 2 * c + u(0, -1)) * hn * hn;
            double uuv = (u(1, 1) - u(1, -1) - u(-1, 1) + u(-1, -1)) * hn * hn / 4;
            double lap = cuu * uuu + cuv * uuv + cvv * uvv;
            curv[row] = std::max(curv[row], std::abs(lap / (4 * kPi) - omega2.at(i, j)));

            double d2u = (u(1, 0) - u(-1, 0)) * hn / 2, d2v = (u(0, 1) - u(0, -1)) * hn / 2;
            double d4u = (-u(2, 0) + 8 * u(1, 0) - 8 * u(-1, 0) + u(-2, 0)) * hn / 12;
            double d4v = (-u(0, 2) + 8 * u(0, 1) - 8 * u(0, -1) + u(0, -2)) * hn / 12;
            smooth[row] = std::max({smooth[row], std::abs(d2u - d4u), std::abs(d2v - d4v)});
        }
    });
    AxiomResiduals r;
    for (int i = 0; i < n; ++i) {
        r.curvature = std::max(r.curvature, curv[i]);
        r.smoothness = std::max(r.smoothness, smooth[i]);
    }

    // (iii): punctured grid sum plus the cell around P done analytically
    const double cell = t.area() / (double(n) * n);
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != p.i || j != p.j) s += g.at(i, j) * omega2.at(i, j);
    s *= cell;
    s += omega2.at(p.i, p.j) * (cell_log_integral(t, n) + gf.regular * cell);
    r.normalization = std::abs(s);

    // (iv): g(P, Q) against g(Q, P) built from the kernel at P - Q
    double bp = beta.at(p.i, p.j);
    const int stride = std::max(1, n / 16);
    for (int i = 0; i < n; i += stride)
        for (int j = 0; j < n; j += stride) {
            if (i == p.i && j == p.j) continue;
            double back = green_kernel(t, t.point(double(p.i - i) / n, double(p.j - j) / n)) + bp + beta.at(i, j);
            r.symmetry = std::max(r.symmetry, std::abs(g.at(i, j) - back));
        }
    return r;
}

namespace {

struct LabRun {
    AxiomResiduals axioms;
    double beta_error = 0;   // bump: |beta - phi - const|, flat: |beta|
    double transfer = 0;     // direct route against transfer
    double consistency = 0;  // metric consistency, sampled
    double mean_value = 0;   // -g_w + beta(P) + beta(Q) against -g
};

LabRun run_lab(const Torus& t, int n, const TorusOptions& o) {
    LabRun out;
    GridPoint p = grid_point(0.25, 0.375, n);
    GridField rho = o.bump ? bump_density(t, n, o.amp) : flat_density(t, n);
    GridField beta = beta_from_omega(t, rho, n);
    GreenField g = flat_green(t, p, n);
    GreenField gw = transfer_green(g, beta);
    out.axioms = check_green_axioms(gw, rho, beta);

    GridField phi = o.bump ? bump_field(n, o.amp) : GridField(n);
    GridField diff(n);
    for (size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = beta.values[i] - phi.values[i];
    double dm = diff.mean();
    for (double x : diff.values) out.beta_error = std::max(out.beta_error, std::abs(x - dm));
    if (!o.bump)
        for (double x : beta.values) out.beta_error = std::max(out.beta_error, std::abs(x));

    // Direct route: G = g + w + c_P with w the zero-mean potential of rho - 1/A
    // and c_P fixed by int G omega = 0 through Green's identity.
    GridField f(n);
    for (size_t i = 0; i < f.values.size(); ++i) f.values[i] = rho.values[i] - 1 / t.area();
    GridField w = poisson(t, f);
    double w_rho = 0;
    for (size_t i = 0; i < w.values.size(); ++i) w_rho += w.values[i] * rho.values[i];
    w_rho *= t.area() / (double(n) * n);
    double cp = w.at(p.i, p.j) - w.mean() - w_rho;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == p.i && j == p.j) continue;
            double direct = g.g.at(i, j) + w.at(i, j) + cp;
            out.transfer = std::max(out.transfer, std::abs(direct - gw.g.at(i, j)));
        }

    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> pick(0, n - 1);
    double bp = beta.at(p.i, p.j);
    for (int draw = 0; draw < 100;) {
        GridPoint q{pick(rng), pick(rng)};
        if (in_mask(p, q.i, q.j, n)) continue;
        ++draw;
        out.consistency = std::max(out.consistency, arakelov_metric_consistency(g, gw, beta, q));
        double mv = (-gw.g.at(q.i, q.j) + bp + beta.at(q.i, q.j)) - (-g.g.at(q.i, q.j));
        out.mean_value = std::max(out.mean_value, std::abs(mv));
    }
    return out;
}

// below this a residual is roundoff and carries no order information
constexpr double kFloor = 1e-12;

}  // namespace

Report torus_check(const Torus& t, const TorusOptions& o) {
    check_resolution(o.n);
    if (o.n < 32) throw ConfigurationError("torus check needs n >= 32 (it also runs at n/2)");
    if (o.bump) {
        GridField rho = bump_density(t, o.n, o.amp);
        for (double x : rho.values)
            if (!(x >= 0)) throw DomainError("bump amplitude too large: omega density turns negative");
    }
    LabRun hi = run_lab(t, o.n, o), lo = run_lab(t, o.n / 2, o);

    Report rep;
    char title[128];
    std::snprintf(title, sizeof title, "torus tau=%.6g%+.6gi n=%d omega=%s", t.tau.real(), t.tau.imag(), o.n,
                  o.bump ? "bump" : "flat");
    rep.title = title;
    const std::string ctx = "n=" + std::to_string(o.n);

    auto add = [&](const std::string& id, const std::string& label, bool ok, const std::string& detail,
                   std::vector<std::string> notes = {}) {
        CheckResult c;
        c.id = id;
        c.label = label;
        Instance inst;
        inst.context = ctx;
        inst.diff = detail;
        c.record(ok, inst);
        c.notes = std::move(notes);
        rep.checks.push_back(std::move(c));
    };
    auto axiom = [&](const std::string& id, const std::string& label, double h, double l) {
        add(id, label, h < o.tol_axiom, "residual " + sci(h) + " >= " + sci(o.tol_axiom),
            {"n=" + std::to_string(o.n) + ": " + sci(h), "n=" + std::to_string(o.n / 2) + ": " + sci(l)});
    };
    axiom("torus.ii", "dd^c g = omega - delta off the mask", hi.axioms.curvature, lo.axioms.curvature);
    axiom("torus.iii", "int g omega = 0", hi.axioms.normalization, lo.axioms.normalization);
    axiom("torus.iv", "g(P,Q) = g(Q,P)", hi.axioms.symmetry, lo.axioms.symmetry);
    axiom("torus.v", "smooth part: second against fourth order gradient", hi.axioms.smoothness, lo.axioms.smoothness);

    // symmetry is exact up to roundoff, so it carries no order
    std::vector<std::string> notes;
    bool order_ok = true;
    auto order = [&](const char* name, double h, double l) {
        if (h < kFloor && l < kFloor) {
            notes.push_back(std::string(name) + ": at roundoff floor");
            return;
        }
        double ord = std::log2(l / h);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s: order %.3f", name, ord);
        notes.push_back(buf);
        if (!(ord >= o.min_order)) order_ok = false;
    };
    order("ii", hi.axioms.curvature, lo.axioms.curvature);
    order("iii", hi.axioms.normalization, lo.axioms.normalization);
    order("v", hi.axioms.smoothness, lo.axioms.smoothness);
    add("torus.order", "observed convergence order between n/2 and n", order_ok,
        "order below " + std::to_string(o.min_order), notes);

    add("torus.beta", o.bump ? "beta recovers the bump up to a constant" : "flat omega gives beta = 0",
        hi.beta_error < o.tol_transfer, "max error " + sci(hi.beta_error), {"max error " + sci(hi.beta_error)});
    add("torus.transfer", "g_omega = g + beta(P) + beta(Q) against the direct solve", hi.transfer < o.tol_transfer,
        "residual " + sci(hi.transfer), {"residual " + sci(hi.transfer)});
    add("torus.consistency", "-g_w(P,Q) + beta(P) = -g(P,Q) - beta(Q), 100 pairs", hi.consistency < o.tol_consistency,
        "max residual " + sci(hi.consistency), {"max residual " + sci(hi.consistency)});
    add("torus.mean_value", "-g(P,Q) from the flat and the transferred theory", hi.mean_value < o.tol_transfer,
        "max residual " + sci(hi.mean_value), {"max residual " + sci(hi.mean_value)});

    CheckResult vi;
    vi.id = "torus.vi";
    vi.label = "log-log growth near cusps";
    vi.status = Status::Flag;
    vi.notes.push_back("no cusps on a smooth genus one grid; not tested");
    rep.checks.push_back(vi);
    return rep;
}

}  // namespace arakelov::torus
