#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "arakelov/parallel.hpp"
#include "arakelov/spectral.hpp"

namespace arakelov::spectral {

namespace {

constexpr double kTraceTol = 1e-9;

bool close(const Mat2& a, const Mat2& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

Mat2 inverse(const Mat2& m) {
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r;
}

using Word = std::vector<int>;

struct Alphabet {
    std::vector<Mat2> letters;  // gens then inverses
    int k;
    explicit Alphabet(const std::vector<Mat2>& gens) : k(static_cast<int>(gens.size())) {
        letters = gens;
        for (const auto& g : gens) letters.push_back(inverse(g));
    }
    int inv(int a) const { return (a + k) % (2 * k); }
    int size() const { return 2 * k; }
    Mat2 eval(const Word& w) const {
        Mat2 m = Mat2::Identity();
        for (int a : w) m = m * letters[a];
        return m;
    }
};

// Smallest rotation of w and of its inverse word.
Word canonical_cyclic(const Word& w, const Alphabet& A) {
    Word inv(w.rbegin(), w.rend());
    for (int& a : inv) a = A.inv(a);
    Word best = w;
    for (const Word* src : {&w, static_cast<const Word*>(&inv)}) {
        Word r = *src;
        for (size_t i = 0; i < r.size(); ++i) {
            std::rotate(r.begin(), r.begin() + 1, r.end());
            if (r < best) best = r;
        }
    }
    return best;
}

bool proper_power(const Word& w) {
    size_t n = w.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool periodic = true;
        for (size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
        if (periodic) return true;
    }
    return false;
}

struct ClassRep {
    Word word;
    Mat2 m;
    double length;
};

// Key for a matrix up to sign, rounded.
std::array<long long, 4> sign_key(const Mat2& m) {
    Mat2 x = m;
    double lead = std::abs(x(1, 0)) > 1e-9 ? x(1, 0) : x(1, 1);
    if (lead < 0) x = -x;
    return {std::llround(x(0, 0) * 1e8), std::llround(x(0, 1) * 1e8), std::llround(x(1, 0) * 1e8),
            std::llround(x(1, 1) * 1e8)};
}

Mat2 read_mat(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
        throw ShapeMismatch("generator is not a 2x2 matrix");
    Mat2 m;
    m << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>();
    return m;
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Hyperbolic:
            return "hyperbolic";
        case Kind::Parabolic:
            return "parabolic";
        case Kind::Elliptic:
            return "elliptic";
        case Kind::Identity:
            return "identity";
    }
    return "?";
}

Kind classify(const Mat2& m) {
    if (std::abs(m.determinant() - 1) > 1e-9) throw DomainError("matrix does not have determinant 1");
    double t = std::abs(m.trace());
    if (std::abs(t - 2) <= kTraceTol) {
        if (close(m, Mat2::Identity(), kTraceTol) || close(m, -Mat2::Identity(), kTraceTol)) return Kind::Identity;
        return Kind::Parabolic;
    }
    return t > 2 ? Kind::Hyperbolic : Kind::Elliptic;
}

double translation_length(const Mat2& m) {
    if (classify(m) != Kind::Hyperbolic) throw DomainError("translation length needs a hyperbolic element");
    return 2 * std::acosh(std::abs(m.trace()) / 2);
}

void FuchsianGroup::validate() const {
    for (size_t i = 0; i < generators.size(); ++i)
        if (std::abs(generators[i].determinant() - 1) > 1e-12)
            throw DomainError("generator " + std::to_string(i + 1) + " does not have determinant 1");
}

FuchsianGroup FuchsianGroup::parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("group file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw ConfigurationError("group file: expected an object with 'generators'");
    FuchsianGroup g;
    try {
        for (const auto& m : j["generators"]) g.generators.push_back(read_mat(m));
        if (j.contains("q")) g.q = j["q"].get<int>();
        if (j.contains("N")) g.cusps = j["N"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("group file: ") + e.what());
    }
    g.validate();
    return g;
}

FuchsianGroup FuchsianGroup::from_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_json(ss.str());
}

SpectrumResult length_spectrum(const FuchsianGroup& g, const TruncationParams& p) {
    p.validate();
    g.validate();
    SpectrumResult out;
    if (g.generators.empty()) {
        out.warnings.push_back("no generators: empty spectrum");
        return out;
    }
    Alphabet A(g.generators);
    const int L = p.word_length;

    struct Chunk {
        std::map<Word, ClassRep> classes;
        long words = 0;
        double longest_min = INFINITY;  // shortest length among words of length L
    };
    std::vector<Chunk> chunks(A.size());
    parallel_chunks(A.size(), [&](size_t first) {
        Chunk& ch = chunks[first];
        Word w;
        std::function<void(const Mat2&)> visit = [&](const Mat2& m) {
            ++ch.words;
            bool cyclic = w.size() == 1 || w.back() != A.inv(w.front());
            double t = std::abs(m.trace());
            if (cyclic && t > 2 + kTraceTol) {
                double l = 2 * std::acosh(t / 2);
                if (static_cast<int>(w.size()) == L) ch.longest_min = std::min(ch.longest_min, l);
                if (!proper_power(w)) {
                    Word key = canonical_cyclic(w, A);
                    ch.classes.emplace(key, ClassRep{key, A.eval(key), l});
                }
            }
            if (static_cast<int>(w.size()) == L) return;
            for (int a = 0; a < A.size(); ++a) {
                if (a == A.inv(w.back())) continue;
                w.push_back(a);
                visit(m * A.letters[a]);
                w.pop_back();
            }
        };
        w.push_back(static_cast<int>(first));
        visit(A.letters[first]);
    });

    std::map<Word, ClassRep> classes;
    double cutoff = INFINITY;
    for (auto& ch : chunks) {
        out.words += ch.words;
        cutoff = std::min(cutoff, ch.longest_min);
        classes.merge(ch.classes);
    }

    std::vector<ClassRep> reps;
    for (auto& [k, c] : classes) reps.push_back(c);
    std::stable_sort(reps.begin(), reps.end(), [](const ClassRep& a, const ClassRep& b) { return a.length < b.length; });

    // Merge word classes that name the same element up to conjugation by a
    // rotation, sign or inversion. Pairwise within a length band and closed
    // transitively, so the result does not depend on the letter order.
    std::vector<std::vector<Mat2>> rots(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        Word r = reps[i].word;
        for (size_t k = 0; k < r.size(); ++k) {
            std::rotate(r.begin(), r.begin() + 1, r.end());
            Mat2 m = A.eval(r);
            for (const Mat2& t : {m, Mat2(-m), inverse(m), Mat2(-inverse(m))}) rots[i].push_back(t);
        }
    }
    std::vector<size_t> parent(reps.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> root = [&](size_t i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
    for (size_t i = 0; i < reps.size(); ++i) {
        for (size_t j = i + 1; j < reps.size(); ++j) {
            if (std::abs(reps[j].length - reps[i].length) > kTraceTol * std::max(1.0, reps[i].length)) break;
            if (root(i) == root(j)) continue;
            double tol = 1e-9 * std::max(1.0, reps[i].m.cwiseAbs().maxCoeff());
            bool same = false;
            for (const Mat2& a : rots[i]) {
                for (const Mat2& b : rots[j])
                    if (close(a, b, tol)) {
                        same = true;
                        break;
                    }
                if (same) break;
            }
            if (same) parent[root(j)] = root(i);
        }
    }
    std::vector<ClassRep> distinct;
    for (size_t i = 0; i < reps.size(); ++i)
        if (root(i) == i) distinct.push_back(reps[i]);

    // Drop lengths that are integer multiples of shorter ones (powers hidden by relations).
    std::vector<ClassRep> primitive;
    for (const auto& c : distinct) {
        bool power = false;
        for (const auto& s : primitive) {
            double ratio = c.length / s.length;
            double k = std::round(ratio);
            if (k >= 2 && std::abs(ratio - k) <= kTraceTol * ratio) {
                power = true;
                break;
            }
        }
        if (!power) primitive.push_back(c);
    }

    for (const auto& c : primitive) out.spectrum.entries.emplace_back(c.length, 1);
    // merge equal lengths into multiplicities
    std::vector<std::pair<double, long>> merged;
    for (const auto& e : out.spectrum.entries) {
        if (!merged.empty() && std::abs(merged.back().first - e.first) <= kTraceTol * std::max(1.0, e.first))
            merged.back().second += 1;
        else
            merged.push_back(e);
    }
    out.spectrum.entries = merged;
    out.spectrum.cutoff_length = std::isfinite(cutoff) ? cutoff : 0;
    if (out.spectrum.entries.empty()) out.warnings.push_back("no hyperbolic elements found");
    return out;
}

Truncated<cplx> eisenstein(const FuchsianGroup& g, const Mat2& sigma, cplx s, cplx z, const TruncationParams& p) {
    p.validate();
    g.validate();
    if (!(z.imag() > 0)) throw DomainError("eisenstein needs Im z > 0");
    if (std::abs(sigma.determinant() - 1) > 1e-9) throw DomainError("sigma does not have determinant 1");
    Mat2 si = inverse(sigma);
    if (g.generators.empty()) throw ConfigurationError("eisenstein: empty group has no cusp stabilizer");
    Alphabet A(g.generators);

    // sigma^-1 gamma sigma must be a translation for some short gamma.
    bool stabilizer = false;
    {
        std::vector<std::pair<Word, Mat2>> level{{{}, Mat2::Identity()}};
        for (int len = 1; len <= 3 && !stabilizer; ++len) {
            std::vector<std::pair<Word, Mat2>> nxt;
            for (const auto& [w, m] : level)
                for (int a = 0; a < A.size(); ++a) {
                    if (!w.empty() && a == A.inv(w.back())) continue;
                    Word w2 = w;
                    w2.push_back(a);
                    Mat2 m2 = m * A.letters[a];
                    Mat2 c = si * m2 * sigma;
                    double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
                    if (std::abs(c(1, 0)) <= 1e-9 * scale && std::abs(std::abs(c(0, 0)) - 1) <= 1e-9 &&
                        std::abs(c(0, 0) - c(1, 1)) <= 1e-9 && std::abs(c(0, 1)) > 1e-9)
                        stabilizer = true;
                    nxt.emplace_back(w2, m2);
                }
            level = std::move(nxt);
        }
    }
    if (!stabilizer)
        throw ConfigurationError("eisenstein: sigma does not conjugate any short group element to a translation");

    // Breadth-first over group elements (deduplicated up to sign), collecting
    // the bottom rows of sigma^-1 gamma up to sign.
    std::map<std::array<long long, 2>, std::pair<double, double>> rows;
    std::set<std::array<long long, 4>> seen;
    std::vector<Mat2> frontier{Mat2::Identity()};
    seen.insert(sign_key(Mat2::Identity()));
    auto add_row = [&](const Mat2& gm) {
        Mat2 m = si * gm;
        double c = m(1, 0), d = m(1, 1);
        if (c < -1e-12 || (std::abs(c) <= 1e-12 && d < 0)) {
            c = -c;
            d = -d;
        }
        rows.emplace(std::array<long long, 2>{std::llround(c * 1e8), std::llround(d * 1e8)}, std::make_pair(c, d));
    };
    add_row(Mat2::Identity());
    for (int depth = 1; depth <= p.coset_depth; ++depth) {
        std::vector<Mat2> nxt;
        for (const auto& m : frontier)
            for (const auto& l : A.letters) {
                Mat2 m2 = m * l;
                if (seen.insert(sign_key(m2)).second) {
                    nxt.push_back(m2);
                    add_row(m2);
                }
            }
        frontier = std::move(nxt);
    }

    Truncated<cplx> out;
    for (const auto& [key, cd] : rows) {
        cplx denom = cd.first * z + cd.second;
        double im = z.imag() / std::norm(denom);
        out.value += std::exp(s * std::log(im));
    }
    out.terms = static_cast<long>(rows.size());
    out.error_bound = INFINITY;  // no tail bound for the coset sum
    return out;
}

}  // namespace arakelov::spectral
