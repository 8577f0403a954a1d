#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "arakelov/spectral.hpp"

namespace arakelov::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// log(1 - x), accurate for small x
cplx log1m(cplx x) {
    if (std::abs(x) < 1e-4) return -x * (1.0 + x * (0.5 + x * (1.0 / 3 + x * 0.25)));
    return std::log(1.0 - x);
}

}  // namespace

void TruncationParams::validate() const {
    if (m_max < 1 || lattice_radius < 1 || word_length < 1 || coset_depth < 0 || !(tol > 0))
        throw ConfigurationError("truncation parameters must be positive");
}

void LengthSpectrum::normalize() {
    for (const auto& [l, m] : entries) {
        if (!(l > 0) || !std::isfinite(l)) throw DomainError("lengths must be positive and finite");
        if (m < 1) throw DomainError("multiplicities must be positive");
    }
    std::sort(entries.begin(), entries.end());
    std::vector<std::pair<double, long>> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && std::abs(merged.back().first - e.first) <= 1e-12 * e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    entries = std::move(merged);
}

LengthSpectrum LengthSpectrum::parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    LengthSpectrum s;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (line != "length,multiplicity")
                throw ConfigurationError("line 1: expected header 'length,multiplicity'");
            header = true;
            continue;
        }
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw ConfigurationError("line " + std::to_string(lineno) + ": expected two fields");
        try {
            size_t used = 0;
            std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
            double l = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument(a);
            long m = std::stol(b, &used);
            if (used != b.size()) throw std::invalid_argument(b);
            s.entries.emplace_back(l, m);
        } catch (const std::logic_error&) {
            throw ConfigurationError("line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (!header) throw ConfigurationError("empty spectrum file (header missing)");
    s.normalize();
    return s;
}

LengthSpectrum LengthSpectrum::from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

Truncated<cplx> log_selberg_zeta(const LengthSpectrum& spec, cplx s, const TruncationParams& p) {
    p.validate();
    Truncated<cplx> out;
    const double sigma = s.real();
    for (const auto& [l, mult] : spec.entries) {
        double w = p.weight_multiplicity ? double(mult) : 1.0;
        cplx acc = 0;
        for (int m = 0; m <= p.m_max; ++m) {
            cplx x = std::exp(-(s + double(m)) * l);
            if (std::abs(1.0 - x) == 0)
                throw SingularityError("truncated Selberg product has a vanishing factor (l=" + std::to_string(l) +
                                       ", m=" + std::to_string(m) + ")");
            acc += log1m(x);
            ++out.terms;
        }
        out.value += w * acc;
        double start = sigma + p.m_max + 1;
        if (start <= 0) {
            out.error_bound = INFINITY;
        } else {
            double x0 = std::exp(-start * l);
            out.error_bound += w * x0 / (1 - std::exp(-l)) / (1 - x0);
        }
    }
    return out;
}

Truncated<cplx> selberg_zeta(const LengthSpectrum& spec, cplx s, const TruncationParams& p) {
    Truncated<cplx> lg = log_selberg_zeta(spec, s, p);
    Truncated<cplx> out;
    out.value = std::exp(lg.value);
    out.terms = lg.terms;
    out.error_bound = std::abs(out.value) * std::expm1(lg.error_bound);
    return out;
}

cplx det_delta(const LengthSpectrum& spec, cplx s, int q, int cusps, const TruncationParams& p) {
    double k = 2.0 * q - 2 + cusps;
    return std::exp(log_selberg_zeta(spec, s, p).value - k * log_n_function(s));
}

Truncated<double> central_derivative(const std::function<double(double)>& f, double x, double tol) {
    auto d = [&](double h) { return (f(x + h) - f(x - h)) / (2 * h); };
    auto rich = [&](double h) { return (4 * d(h / 2) - d(h)) / 3; };
    double h = 1e-4;
    double prev = rich(h);
    while (true) {
        h /= 2;
        if (h < 1e-10) throw StepUnderflow("derivative did not settle before the step underflowed");
        double cur = rich(h);
        double diff = std::abs(cur - prev);
        if (diff <= tol * std::max(std::abs(cur), 1e-300)) return {cur, diff, 0};
        prev = cur;
    }
}

Truncated<double> det_star(const LengthSpectrum& spec, int q, int cusps, const TruncationParams& p) {
    auto f = [&](double s) { return det_delta(spec, cplx(s, 0), q, cusps, p).real(); };
    return central_derivative(f, 1.0, std::max(p.tol, 1e-7));
}

double ap_volume(double det_ar, double vol_ar, double det_hyp, int q) {
    if (q <= 1) throw DomainError("ap_volume needs q >= 2");
    if (!(det_ar > 0 && vol_ar > 0 && det_hyp > 0)) throw DomainError("ap_volume inputs must be positive");
    double a = std::log(det_ar / vol_ar) - std::log(det_hyp / (2 * kPi * (2 * q - 2)));
    return std::exp(6.0 / (2 * q - 2) * a);
}

double lambda1_metric_value(double det_im_tau, double det_hyp, int q) {
    if (q <= 1) throw DomainError("lambda1_metric_value needs q >= 2");
    if (!(det_im_tau > 0 && det_hyp > 0)) throw DomainError("lambda1_metric_value inputs must be positive");
    return det_im_tau * 2 * kPi * (2 * q - 2) / det_hyp;
}

}  // namespace arakelov::spectral
