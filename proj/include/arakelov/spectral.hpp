#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arakelov/errors.hpp"

namespace arakelov::spectral {

using cplx = std::complex<double>;

// ------------------------------------------------------- special functions

double euler_gamma();
// zeta'(-1) = 1/12 - log A; log A from zeta'(2) by Euler-Maclaurin.
double zeta_prime_minus_one();
double glaisher();
// E = -1/4 - log(2 pi)/2 + 2 zeta'(-1)
double e_constant();

cplx log_gamma(cplx z);  // throws SingularityError at 0, -1, -2, ...
cplx gamma(cplx z);
cplx digamma(cplx z);

// Barnes G with G(1) = 1, G(z+1) = Gamma(z) G(z). Its zeros at 0, -1, ...
// are reported as SingularityError since only log G is formed.
cplx log_barnes_g(cplx z);
cplx barnes_g(cplx z);

// Convention: Gamma_2(s) = 1 / G(s), so that
// N(s) = e^{-E + s(s-1)} (2 pi)^{-s} Gamma(s) G(s)^2.
cplx gamma2(cplx s);
cplx log_n_function(cplx s);
cplx n_function(cplx s);

// ---------------------------------------------------------------- spectra

template <class T>
struct Truncated {
    T value{};
    double error_bound = 0;  // bound on |exact - value| from the dropped tail
    long terms = 0;          // factors / lattice points / cosets used
};

struct TruncationParams {
    int m_max = 60;
    int lattice_radius = 6;
    int word_length = 6;
    int coset_depth = 12;
    double tol = 1e-12;
    bool weight_multiplicity = true;  // false: each length counted once in the product

    void validate() const;
};

struct LengthSpectrum {
    std::vector<std::pair<double, long>> entries;  // (length, multiplicity), ascending
    double cutoff_length = 0;                      // 0: unknown / complete

    // Sorts, merges equal lengths (relative 1e-12) and checks positivity.
    void normalize();
    static LengthSpectrum from_csv(const std::string& path);
    static LengthSpectrum parse_csv(const std::string& text);
};

Truncated<cplx> log_selberg_zeta(const LengthSpectrum& spec, cplx s, const TruncationParams& p = {});
Truncated<cplx> selberg_zeta(const LengthSpectrum& spec, cplx s, const TruncationParams& p = {});

// Z(s) / N(s)^{2q-2+N}
cplx det_delta(const LengthSpectrum& spec, cplx s, int q, int cusps, const TruncationParams& p = {});

// Central differences with Richardson extrapolation: h = 1e-4 halved until two
// extrapolants agree to tol (relative). Throws StepUnderflow below h = 1e-10.
Truncated<double> central_derivative(const std::function<double(double)>& f, double x, double tol);

// d/ds det_delta at s = 1 by central_derivative, tolerance max(p.tol, 1e-7):
// det_delta carries ~1e-13 relative noise, so tighter steps only chase roundoff.
Truncated<double> det_star(const LengthSpectrum& spec, int q, int cusps, const TruncationParams& p = {});

// exp( 6/(2q-2) * ( log(det_ar/vol_ar) - log(det_hyp / (2 pi (2q-2))) ) )
double ap_volume(double det_ar, double vol_ar, double det_hyp, int q);
double lambda1_metric_value(double det_im_tau, double det_hyp, int q);

// ------------------------------------------------------------------ theta

struct PeriodMatrix {
    Eigen::MatrixXcd Z;
    Eigen::MatrixXd Y;

    explicit PeriodMatrix(const Eigen::MatrixXcd& z);  // validates symmetry and Im > 0
    int genus() const { return static_cast<int>(Z.rows()); }
    double min_eigenvalue() const;
    static PeriodMatrix from_json(const std::string& path);
};

// Sum over |n_i| <= radius; error_bound is a rigorous bound on the rest.
// Throws ToleranceNotMet if the bound exceeds p.tol.
Truncated<cplx> theta(const PeriodMatrix& Z, const Eigen::VectorXcd& z, const TruncationParams& p = {});
// sqrt(det Y) exp(-2 pi y Y^-1 y) |theta|^2, y = Im z
Truncated<double> theta_norm(const PeriodMatrix& Z, const Eigen::VectorXcd& z, const TruncationParams& p = {});

// -------------------------------------------------------- Fuchsian groups

using Mat2 = Eigen::Matrix2d;

enum class Kind { Hyperbolic, Parabolic, Elliptic, Identity };
std::string kind_name(Kind k);

Kind classify(const Mat2& m);  // throws DomainError if |det - 1| > 1e-9
double translation_length(const Mat2& m);

struct FuchsianGroup {
    std::vector<Mat2> generators;
    std::optional<int> q, cusps;

    void validate() const;  // |det - 1| <= 1e-12
    static FuchsianGroup from_json(const std::string& path);
    static FuchsianGroup parse_json(const std::string& text);
};

// Classes of primitive hyperbolic elements met by cyclically reduced words of
// length <= p.word_length, unoriented (g ~ g^-1). cutoff_length is the
// shortest length among words of maximal length: longer words were not seen.
struct SpectrumResult {
    LengthSpectrum spectrum;
    long words = 0;
    std::vector<std::string> warnings;
};
SpectrumResult length_spectrum(const FuchsianGroup& g, const TruncationParams& p = {});

// Sum over Gamma_i \ Gamma of Im(sigma^-1 gamma z)^s over cosets reached by
// words of length <= p.coset_depth. Throws ConfigurationError when no word of
// length <= 3 conjugates under sigma to a translation.
Truncated<cplx> eisenstein(const FuchsianGroup& g, const Mat2& sigma, cplx s, cplx z, const TruncationParams& p = {});

}  // namespace arakelov::spectral
