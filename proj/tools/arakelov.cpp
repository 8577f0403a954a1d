// arakelov: command line front end for the verification suites and the numerics.
//
// Exit codes: 0 success / all checks pass, 1 verification or computation
// failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "arakelov/dsl.hpp"
#include "arakelov/spectral.hpp"
#include "arakelov/suites.hpp"
#include "arakelov/torus.hpp"

using namespace arakelov;
using nlohmann::json;
using cplx = std::complex<double>;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

int g_digits = 9;
bool g_json = false;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", g_digits, x);
    std::string s = buf;
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

std::string num(cplx z) { return z.imag() == 0 ? num(z.real()) : num(z.real()) + "," + num(z.imag()); }

double parse_real(const std::string& s, const std::string& what) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::logic_error&) {
        throw UsageError(what + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError(what + ": not a number: '" + s + "'");
    return v;
}

// "re" or "re,im"
cplx parse_complex(const std::string& s, const std::string& what) {
    size_t comma = s.find(',');
    if (comma == std::string::npos) return parse_real(s, what);
    return {parse_real(s.substr(0, comma), what), parse_real(s.substr(comma + 1), what)};
}

// entries separated by ';' or blanks
Eigen::VectorXcd parse_vector(std::string s, const std::string& what) {
    std::replace(s.begin(), s.end(), ';', ' ');
    std::vector<cplx> v;
    std::stringstream in(s);
    std::string item;
    while (in >> item) v.push_back(parse_complex(item, what));
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const json& j, const std::string& text) {
    if (g_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int emit_report(const Report& r) {
    emit(r.json(), r.text());
    return r.ok() ? 0 : 1;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::string script, builtin, rules;
    std::optional<int> q, marks;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.script.empty() && a.builtin.empty()) throw UsageError("verify needs a script or --builtin");
    std::optional<Regime> regime;
    if (a.rules == "adjunction") regime = Regime::Adjunction;
    if (a.rules == "cuspidal") regime = Regime::Cuspidal;

    Report total;
    if (!a.script.empty()) {
        dsl::Script s;
        try {
            s = dsl::parse(read_file(a.script));
        } catch (const SyntaxError& e) {
            throw UsageError(a.script + ":" + e.what());
        }
        dsl::RunOptions opts;
        opts.title = a.script;
        if (a.q) {
            RuleSet rs = regime == Regime::Cuspidal ? RuleSet::cuspidal() : RuleSet::adjunction();
            opts.default_contexts.emplace_back(CurveContext(*a.q, a.marks.value_or(0)), rs);
        }
        total = dsl::run(s, opts);
    }
    if (!a.builtin.empty()) {
        SweepFilter f{regime, a.q, a.marks};
        Report b = run_builtin(a.builtin, f);
        if (total.title.empty())
            total = b;
        else
            total.append(b);
    }
    return emit_report(total);
}

// ---------------------------------------------------------------- numerics

int cmd_zeta(const std::string& file, const std::string& s_text, int mmax, bool unweighted) {
    spectral::TruncationParams p;
    p.m_max = mmax;
    p.weight_multiplicity = !unweighted;
    p.validate();
    cplx s = parse_complex(s_text, "--s");
    auto spec = spectral::LengthSpectrum::from_csv(file);
    auto z = spectral::selberg_zeta(spec, s, p);
    if (z.error_bound > 0) warn("tail bound " + num(z.error_bound) + " after " + std::to_string(z.terms) + " factors");
    json j{{"command", "zeta"}, {"s", cjson(s)}, {"value", cjson(z.value)}, {"error_bound", z.error_bound}, {"terms", z.terms}};
    emit(j, num(z.value) + "\n");
    return 0;
}

int cmd_detstar(const std::string& file, int q, int cusps, int mmax) {
    if (q < 0 || cusps < 0) throw UsageError("--q and --cusps must be nonnegative");
    spectral::TruncationParams p;
    p.m_max = mmax;
    p.validate();
    auto spec = spectral::LengthSpectrum::from_csv(file);
    auto d = spectral::det_star(spec, q, cusps, p);
    warn("derivative settled to " + num(d.error_bound));
    json j{{"command", "detstar"}, {"q", q}, {"cusps", cusps}, {"value", d.value}, {"error_bound", d.error_bound}};
    emit(j, num(d.value) + "\n");
    return 0;
}

int cmd_apvol(double det_ar, double vol_ar, double det_hyp, int q) {
    double v = spectral::ap_volume(det_ar, vol_ar, det_hyp, q);
    json j{{"command", "apvol"}, {"q", q}, {"value", v}};
    emit(j, num(v) + "\n");
    return 0;
}

int cmd_theta(const std::string& file, const std::string& z_text, int radius, double tol) {
    spectral::TruncationParams p;
    p.lattice_radius = radius;
    p.tol = tol;
    p.validate();
    auto P = spectral::PeriodMatrix::from_json(file);
    Eigen::VectorXcd z = parse_vector(z_text, "--z");
    if (z.size() != P.genus())
        throw UsageError("--z has " + std::to_string(z.size()) + " entries, the period matrix needs " +
                         std::to_string(P.genus()));
    auto t = spectral::theta(P, z, p);
    auto nrm = spectral::theta_norm(P, z, p);
    warn("tail bound " + num(t.error_bound) + " over " + std::to_string(t.terms) + " lattice points");
    json j{{"command", "theta"}, {"value", cjson(t.value)}, {"norm", nrm.value}, {"error_bound", t.error_bound},
           {"terms", t.terms}};
    emit(j, "theta " + num(t.value) + "\nnorm " + num(nrm.value) + "\n");
    return 0;
}

int cmd_spectrum(const std::string& file, int max_word) {
    spectral::TruncationParams p;
    p.word_length = max_word;
    p.validate();
    auto g = spectral::FuchsianGroup::from_json(file);
    auto r = spectral::length_spectrum(g, p);
    for (const auto& w : r.warnings) warn(w);
    if (r.spectrum.cutoff_length > 0)
        warn("complete only below length " + num(r.spectrum.cutoff_length) + " (" + std::to_string(r.words) +
             " words)");
    json entries = json::array();
    std::string text = "length,multiplicity\n";
    char buf[64];
    for (const auto& [l, m] : r.spectrum.entries) {
        entries.push_back({{"length", l}, {"multiplicity", m}});
        std::snprintf(buf, sizeof buf, "%.17g,%ld\n", l, m);
        text += buf;
    }
    json j{{"command", "spectrum"}, {"entries", entries}, {"cutoff_length", r.spectrum.cutoff_length}, {"words", r.words}};
    emit(j, text);
    return 0;
}

int cmd_eisenstein(const std::string& file, double s, const std::string& z_text, int depth, const std::string& sigma_text) {
    spectral::TruncationParams p;
    p.coset_depth = depth;
    p.validate();
    cplx z = parse_complex(z_text, "--z");
    spectral::Mat2 sigma = spectral::Mat2::Identity();
    if (!sigma_text.empty()) {
        std::stringstream in(sigma_text);
        std::string item;
        std::vector<double> v;
        while (std::getline(in, item, ',')) v.push_back(parse_real(item, "--sigma"));
        if (v.size() != 4) throw UsageError("--sigma takes a,b,c,d");
        sigma << v[0], v[1], v[2], v[3];
    }
    auto g = spectral::FuchsianGroup::from_json(file);
    auto e = spectral::eisenstein(g, sigma, s, z, p);
    warn("no tail bound: sum truncated at depth " + std::to_string(depth) + " (" + std::to_string(e.terms) + " cosets)");
    json j{{"command", "eisenstein"}, {"s", s}, {"z", cjson(z)}, {"value", cjson(e.value)}, {"terms", e.terms}};
    emit(j, num(e.value) + "\n");
    return 0;
}

int cmd_torus(const std::string& tau_text, int grid, bool bump, double amp, const std::string& dump) {
    cplx tau = parse_complex(tau_text, "--tau");
    torus::Torus t(tau);
    torus::TorusOptions o;
    o.n = grid;
    o.bump = bump;
    o.amp = amp;
    Report r = torus::torus_check(t, o);
    if (!dump.empty()) {
        auto rho = bump ? torus::bump_density(t, grid, amp) : torus::flat_density(t, grid);
        auto g = torus::flat_green(t, torus::grid_point(0.25, 0.375, grid), grid);
        auto gw = torus::transfer_green(g, torus::beta_from_omega(t, rho, grid));
        gw.g.write_binary(dump + ".gfld");
        gw.g.write_csv(dump + ".csv");
    }
    return emit_report(r);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Deligne pairing identities and spectral numerics"};
    app.require_subcommand(1);
    app.add_flag("--json", g_json, "JSON output");
    app.add_option("--digits", g_digits, "significant digits in text output")->check(CLI::Range(1, 17));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check identities from a script or a built-in suite");
    verify->add_option("script", va.script, "script file")->check(CLI::ExistingFile);
    verify->add_option("--builtin", va.builtin, "built-in suite")
        ->check(CLI::IsMember({"mumford", "serre", "boundary", "chern", "all"}));
    verify->add_option("--rules", va.rules, "adjunction or cuspidal")->check(CLI::IsMember({"adjunction", "cuspidal"}));
    verify->add_option("--q", va.q, "genus")->check(CLI::NonNegativeNumber);
    verify->add_option("--marks", va.marks, "number of marked points")->check(CLI::NonNegativeNumber);

    std::string spectrum_file, s_text = "2";
    int mmax = 60;
    bool unweighted = false;
    auto* zeta = app.add_subcommand("zeta", "truncated Selberg zeta Z(s)");
    zeta->add_option("--spectrum", spectrum_file, "length spectrum CSV")->required();
    zeta->add_option("--s", s_text, "RE[,IM]")->required();
    zeta->add_option("--mmax", mmax, "product depth");
    zeta->add_flag("--unweighted", unweighted, "count each length once");

    int q = 2, cusps = 0;
    auto* detstar = app.add_subcommand("detstar", "d/ds Z(s)/N(s)^(2q-2+N) at s = 1");
    detstar->add_option("--spectrum", spectrum_file, "length spectrum CSV")->required();
    detstar->add_option("--q", q, "genus")->required();
    detstar->add_option("--cusps", cusps, "number of cusps")->required();
    detstar->add_option("--mmax", mmax, "product depth");

    double det_ar = 0, vol_ar = 0, det_hyp = 0;
    auto* apvol = app.add_subcommand("apvol", "volume from the determinant comparison");
    apvol->add_option("--det-ar", det_ar)->required();
    apvol->add_option("--vol-ar", vol_ar)->required();
    apvol->add_option("--det-hyp", det_hyp)->required();
    apvol->add_option("--q", q)->required();

    std::string period_file, z_text;
    int radius = 6;
    double tol = 1e-12;
    auto* theta = app.add_subcommand("theta", "Riemann theta function");
    theta->add_option("--period", period_file, "JSON {re, im}")->required();
    theta->add_option("--z", z_text, "entries RE,IM separated by ';' or spaces")->required();
    theta->add_option("--radius", radius, "lattice box radius");
    theta->add_option("--tol", tol, "tolerance for the tail bound");

    std::string group_file;
    int max_word = 6;
    auto* spectrum = app.add_subcommand("spectrum", "length spectrum from generators");
    spectrum->add_option("--group", group_file, "JSON {generators}")->required();
    spectrum->add_option("--max-word", max_word, "longest word");

    double s_real = 2;
    int depth = 12;
    std::string sigma_text;
    auto* eis = app.add_subcommand("eisenstein", "truncated Eisenstein series");
    eis->add_option("--group", group_file, "JSON {generators}")->required();
    eis->add_option("--s", s_real)->required();
    eis->add_option("--z", z_text, "RE,IM")->required();
    eis->add_option("--depth", depth, "word depth of the coset search");
    eis->add_option("--sigma", sigma_text, "scaling matrix a,b,c,d (default identity)");

    std::string tau_text, dump;
    int grid = 128;
    bool bump = false;
    double amp = torus::TorusOptions{}.amp;
    auto* tor = app.add_subcommand("torus-check", "Green function axioms on a flat torus");
    tor->add_option("--tau", tau_text, "RE,IM")->required();
    tor->add_option("--grid", grid, "grid size, power of two >= 32");
    tor->add_flag("--bump", bump, "deform omega by a bump");
    tor->add_option("--amp", amp, "bump amplitude");
    tor->add_option("--dump", dump, "write g_omega to PREFIX.gfld and PREFIX.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return cmd_verify(va);
        if (*zeta) return cmd_zeta(spectrum_file, s_text, mmax, unweighted);
        if (*detstar) return cmd_detstar(spectrum_file, q, cusps, mmax);
        if (*apvol) return cmd_apvol(det_ar, vol_ar, det_hyp, q);
        if (*theta) return cmd_theta(period_file, z_text, radius, tol);
        if (*spectrum) return cmd_spectrum(group_file, max_word);
        if (*eis) return cmd_eisenstein(group_file, s_real, z_text, depth, sigma_text);
        if (*tor) return cmd_torus(tau_text, grid, bump, amp, dump);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
