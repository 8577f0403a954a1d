#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "arakelov/parallel.hpp"
#include "arakelov/spectral.hpp"

namespace arakelov::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd read_matrix(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw ConfigurationError(std::string("period matrix: missing '") + key + "'");
    const auto& rows = j[key];
    Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ShapeMismatch(std::string("period matrix: '") + key + "' is not square");
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[i][k].get<double>();
    }
    return m;
}

}  // namespace

PeriodMatrix::PeriodMatrix(const Eigen::MatrixXcd& z) : Z(z) {
    if (Z.rows() != Z.cols() || Z.rows() == 0) throw ShapeMismatch("period matrix must be square and nonempty");
    double scale = std::max(1.0, Z.cwiseAbs().maxCoeff());
    if ((Z - Z.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("period matrix is not symmetric");
    Y = Z.imag();
    if (!(min_eigenvalue() > 0)) throw DomainError("Im Z is not positive definite");
}

double PeriodMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

PeriodMatrix PeriodMatrix::from_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot read " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(path + ": " + e.what());
    }
    Eigen::MatrixXd re = read_matrix(j, "re"), im = read_matrix(j, "im");
    if (re.rows() != im.rows()) throw ShapeMismatch("period matrix: 're' and 'im' differ in size");
    Eigen::MatrixXcd z(re.rows(), re.cols());
    z.real() = re;
    z.imag() = im;
    return PeriodMatrix(z);
}

Truncated<cplx> theta(const PeriodMatrix& P, const Eigen::VectorXcd& z, const TruncationParams& p) {
    p.validate();
    const int q = P.genus();
    if (z.size() != q) throw ShapeMismatch("theta: z has the wrong length");
    const int R = p.lattice_radius;
    const int side = 2 * R + 1;

    // One chunk per value of n_1; reduced in order.
    std::vector<cplx> partial(side);
    parallel_chunks(side, [&](size_t chunk) {
        Eigen::VectorXd n = Eigen::VectorXd::Constant(q, -R);
        n(0) = static_cast<double>(chunk) - R;
        cplx acc = 0;
        while (true) {
            cplx quad = (n.transpose() * P.Z * n)(0, 0);
            cplx lin = (n.transpose().cast<cplx>() * z)(0, 0);
            acc += std::exp(cplx(0, kPi) * quad + cplx(0, 2 * kPi) * lin);
            int i = 1;
            while (i < q && n(i) == R) n(i++) = -R;
            if (i == q) break;
            n(i) += 1;
        }
        partial[chunk] = acc;
    });
    Truncated<cplx> out;
    for (const auto& v : partial) out.value += v;
    out.terms = static_cast<long>(std::pow(side, q));

    // Tail: with c = Y^-1 y, |term| = exp(pi c.Yc) exp(-pi (n+c).Y(n+c)), and
    // on the shell |n|_inf = k, |n+c|_2 >= k - |c|_inf.
    Eigen::VectorXd y = z.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(P.Y);
    Eigen::VectorXd c = llt.solve(y);
    double e0 = kPi * c.dot(y);
    double cinf = c.cwiseAbs().maxCoeff();
    double lam = P.min_eigenvalue();
    double bound = 0;
    for (int k = R + 1;; ++k) {
        if (k <= cinf) {
            bound = INFINITY;
            break;
        }
        double shell = std::pow(2.0 * k + 1, q) - std::pow(2.0 * k - 1, q);
        double d = k - cinf;
        double t = shell * std::exp(e0 - kPi * lam * d * d);
        bound += t;
        if (t <= 1e-18 * bound || t == 0) break;
    }
    out.error_bound = bound;
    double scale = std::max(1.0, std::abs(out.value));
    if (!(bound <= p.tol * scale))
        throw ToleranceNotMet("theta: tail bound " + std::to_string(bound) + " exceeds tolerance at radius " +
                                  std::to_string(R),
                              bound);
    return out;
}

Truncated<double> theta_norm(const PeriodMatrix& P, const Eigen::VectorXcd& z, const TruncationParams& p) {
    Truncated<cplx> t = theta(P, z, p);
    Eigen::VectorXd y = z.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(P.Y);
    Eigen::MatrixXd L = llt.matrixL();
    double logdet = 0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) logdet += 2 * std::log(L(i, i));
    double factor = std::exp(0.5 * logdet - 2 * kPi * y.dot(llt.solve(y)));
    double a = std::abs(t.value);
    Truncated<double> out;
    out.value = factor * a * a;
    out.error_bound = factor * (2 * a * t.error_bound + t.error_bound * t.error_bound);
    out.terms = t.terms;
    return out;
}

}  // namespace arakelov::spectral
