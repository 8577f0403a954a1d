#pragma once

#include <complex>
#include <string>
#include <vector>

#include "arakelov/errors.hpp"
#include "arakelov/report.hpp"

// Genus one lab: the lattice Z + tau Z, fields sampled on an n x n grid in
// lattice coordinates (u, v), z = u + v tau. Densities are taken against
// Lebesgue measure dx dy, so the flat normalized form has density 1 / Im tau.
namespace arakelov::torus {

using cplx = std::complex<double>;

struct Torus {
    cplx tau{0, 1};

    explicit Torus(cplx t);
    double area() const { return tau.imag(); }
    cplx point(double u, double v) const { return u + v * tau; }
};

struct GridField {
    int n = 0;
    std::vector<double> values;  // row-major, index i (u) then j (v)

    GridField() = default;
    explicit GridField(int n_, double fill = 0);

    double& at(int i, int j) { return values[idx(i, j)]; }
    double at(int i, int j) const { return values[idx(i, j)]; }
    // periodic access
    double wrap(int i, int j) const { return at(((i % n) + n) % n, ((j % n) + n) % n); }
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * n + j; }

    // quadrature of f against dx dy: area / n^2 per node
    double integral(const Torus& t) const;
    double mean() const;

    // "GFLD", u32 n, 8 reserved bytes, then n*n little-endian f64
    void write_binary(const std::string& path) const;
    static GridField read_binary(const std::string& path);
    void write_csv(const std::string& path) const;
};

// n >= 16 and a power of two.
void check_resolution(int n);

// Green function of the flat normalized form, g(z) ~ -log|z|^2 at 0, by Ewald
// summation. d = Q - P.
double green_kernel(const Torus& t, cplx d);
// lim g(z) + log|z|^2 as z -> 0
double green_regular(const Torus& t);

struct GridPoint {
    int i = 0, j = 0;
};
// Grid point of (u, v); throws DomainError when (u, v) is off the grid.
GridPoint grid_point(double u, double v, int n);

// g(P, .) for a fixed source P. The value at P itself is NaN; regular holds
// lim g(P, Q) + log|Q - P|^2.
struct GreenField {
    Torus torus;
    GridPoint p;
    GridField g;
    double regular = 0;
};

GreenField flat_green(const Torus& t, GridPoint p, int n);

// dd^c beta = omega - omega_can, int beta (omega + omega_can) = 0, by FFT.
// omega2 holds the density of omega; its mass must be 1 within 1e-10.
GridField beta_from_omega(const Torus& t, const GridField& omega2, int n);

// g(P, Q) + beta(P) + beta(Q)
GreenField transfer_green(const GreenField& g, const GridField& beta);

// |(-g_w(P,Q) + beta(P)) - (-g(P,Q) - beta(Q))|
double arakelov_metric_consistency(const GreenField& g, const GreenField& gw, const GridField& beta, GridPoint q);

// Densities.
GridField flat_density(const Torus& t, int n);
// phi = amp * exp(cos 2 pi (u - 1/2) + cos 2 pi (v - 1/2) - 2)
double bump_potential(double u, double v, double amp);
// 1/A + Laplacian(phi) / (4 pi), analytic
GridField bump_density(const Torus& t, int n, double amp);
GridField bump_field(int n, double amp);

struct AxiomResiduals {
    double curvature = 0;      // (ii) max |L u / 4 pi - rho| off the mask
    double normalization = 0;  // (iii) |int g_w omega|
    double symmetry = 0;       // (iv) max |g(P,Q) - g(Q,P)| over sampled Q
    double smoothness = 0;     // (v) max |D2 grad u - D4 grad u| off the mask
};

// u = g + sum over the 3x3 nearest images of log|Q - P - m - k tau|^2, on an
// unwrapped stencil. Mask radius 2 grid cells around P.
AxiomResiduals check_green_axioms(const GreenField& g, const GridField& omega2, const GridField& beta);

struct TorusOptions {
    int n = 128;
    bool bump = false;
    double amp = 0.01;  // density stays within 2 pi amp of flat
    double tol_axiom = 1e-4, tol_transfer = 1e-8, tol_consistency = 1e-7, min_order = 1.8;
};

// Runs the lab at n and n/2 and reports every residual.
Report torus_check(const Torus& t, const TorusOptions& o);

}  // namespace arakelov::torus
