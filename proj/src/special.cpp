#include <cmath>

#include "arakelov/spectral.hpp"

namespace arakelov::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kLog2Pi = std::log(2 * kPi);

// B_2, B_4, ..., B_24
constexpr double kB[] = {1.0 / 6,           -1.0 / 30,        1.0 / 42,       -1.0 / 30,
                         5.0 / 66,          -691.0 / 2730,    7.0 / 6,        -3617.0 / 510,
                         43867.0 / 798,     -174611.0 / 330,  854513.0 / 138, -236364091.0 / 2730};

bool nonpositive_integer(cplx z) {
    return z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real());
}

// zeta'(2) = -sum log k / k^2; head summed directly, tail by Euler-Maclaurin.
double zeta_prime_two() {
    const int n = 20;
    double head = 0;
    for (int k = 2; k < n; ++k) head += std::log(k) / (double(k) * k);
    double x = n, lx = std::log(x);
    double tail = (lx + 1) / x + 0.5 * lx / (x * x);
    // d^m/dx^m [x^-2 log x] = (-1)^m (m+1)! x^{-2-m} (log x - H_{m+1} + 1)
    double fact2j = 1;  // (2j)!
    for (int j = 1; j <= 8; ++j) {
        fact2j *= (2 * j - 1) * (2 * j);
        int m = 2 * j - 1;
        double mp1f = 1;
        for (int i = 2; i <= m + 1; ++i) mp1f *= i;
        double h = 0;
        for (int i = 1; i <= m + 1; ++i) h += 1.0 / i;
        double deriv = -mp1f * std::pow(x, -2 - m) * (lx - h + 1);
        tail -= kB[j - 1] / fact2j * deriv;
    }
    return -(head + tail);
}

}  // namespace

double euler_gamma() { return 0.57721566490153286061; }

double glaisher() {
    static const double a =
        std::exp((euler_gamma() + kLog2Pi - 6 * zeta_prime_two() / (kPi * kPi)) / 12);
    return a;
}

double zeta_prime_minus_one() { return 1.0 / 12 - std::log(glaisher()); }

double e_constant() { return -0.25 - 0.5 * kLog2Pi + 2 * zeta_prime_minus_one(); }

cplx log_gamma(cplx z) {
    if (nonpositive_integer(z)) throw SingularityError("Gamma has a pole at " + std::to_string(z.real()));
    if (z.real() < 0.5) return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    cplx shift = 0;
    while (std::abs(z) < 15) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx inv = 1.0 / z, inv2 = inv * inv, term = inv;
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi;
    for (int k = 1; k <= 10; ++k) {
        s += kB[k - 1] / (2.0 * k * (2 * k - 1)) * term;
        term *= inv2;
    }
    return s - shift;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx digamma(cplx z) {
    if (nonpositive_integer(z)) throw SingularityError("digamma has a pole at " + std::to_string(z.real()));
    if (z.real() < 0.5) return digamma(1.0 - z) - kPi / std::tan(kPi * z);
    cplx shift = 0;
    while (std::abs(z) < 15) {
        shift += 1.0 / z;
        z += 1.0;
    }
    cplx inv2 = 1.0 / (z * z), term = inv2;
    cplx s = std::log(z) - 0.5 / z;
    for (int k = 1; k <= 10; ++k) {
        s -= kB[k - 1] / (2.0 * k) * term;
        term *= inv2;
    }
    return s - shift;
}

cplx log_barnes_g(cplx z) {
    if (nonpositive_integer(z)) throw SingularityError("log G is singular at " + std::to_string(z.real()));
    // log G(z) = log G(z + n) - sum_{j<n} log Gamma(z + j)
    cplx shift = 0;
    while (z.real() < 20 || std::abs(z) < 20) {
        shift += log_gamma(z);
        z += 1.0;
    }
    cplx w = z - 1.0;
    cplx lw = std::log(w);
    cplx s = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * kLog2Pi - lw / 12.0 + zeta_prime_minus_one();
    cplx inv2 = 1.0 / (w * w), term = inv2;
    for (int k = 1; k <= 8; ++k) {
        s += kB[k] / (4.0 * k * (k + 1)) * term;
        term *= inv2;
    }
    return s - shift;
}

cplx barnes_g(cplx z) {
    if (nonpositive_integer(z)) throw SingularityError("G is evaluated through log G; zero at " + std::to_string(z.real()));
    return std::exp(log_barnes_g(z));
}

cplx gamma2(cplx s) { return std::exp(-log_barnes_g(s)); }

cplx log_n_function(cplx s) {
    return -e_constant() + s * (s - 1.0) - s * kLog2Pi + log_gamma(s) + 2.0 * log_barnes_g(s);
}

cplx n_function(cplx s) { return std::exp(log_n_function(s)); }

}  // namespace arakelov::spectral
