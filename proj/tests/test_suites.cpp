#include <doctest.h>

#include <chrono>

#include "arakelov/suites.hpp"
#include "arakelov/torus.hpp"

using namespace arakelov;

namespace {

const CheckResult* find(const Report& r, const std::string& id) {
    for (const auto& c : r.checks)
        if (c.id == id) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("mumford suite passes on the full sweep") {
    auto t0 = std::chrono::steady_clock::now();
    Report r = run_builtin("mumford");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    INFO(r.text());
    CHECK(r.ok());
    CHECK(r.count(Status::Pass) == r.checks.size());
    // 5 checks with 6 instances, 2 rule sets x 4 genera x 5 mark counts
    CHECK(r.checks[0].instances == 6 * 40);
    CHECK(secs < 5.0);
}

TEST_CASE("mumford suite with a filter") {
    SweepFilter f;
    f.rules = Regime::Adjunction;
    f.q = 2;
    f.marks = 2;
    Report r = run_builtin("mumford", f);
    CHECK(r.ok());
    CHECK(r.checks[0].instances == 6);
    CHECK(r.checks[0].label == "symmetry n <-> 1-n");
}

TEST_CASE("serre suite") {
    Report r = run_builtin("serre");
    INFO(r.text());
    CHECK(r.ok());
    SweepFilter cusp;
    cusp.rules = Regime::Cuspidal;
    Report none = run_builtin("serre", cusp);
    CHECK(none.ok());
    CHECK(none.checks[0].status == Status::Flag);
}

TEST_CASE("boundary suite") {
    Report r = run_builtin("boundary");
    INFO(r.text());
    CHECK(r.ok());
    for (const char* id : {"boundary.a", "boundary.b", "boundary.c", "boundary.tz", "boundary.d", "boundary.d'"}) {
        const CheckResult* c = find(r, id);
        REQUIRE(c);
        CHECK(c->status == Status::Pass);
    }
    const CheckResult* d = find(r, "boundary.d'");
    bool residual_noted = false;
    for (const auto& n : d->notes) residual_noted |= n.find("residual 1 - 24*ZETA_PRIME") != std::string::npos;
    CHECK(residual_noted);
    CHECK(find(r, "boundary.pullback")->status == Status::Flag);
}

TEST_CASE("chern suite flags the n = 1 sign") {
    Report r = run_builtin("chern");
    INFO(r.text());
    CHECK(r.ok());
    CHECK(find(r, "chern.lambda_n")->status == Status::Pass);
    CHECK(find(r, "chern.tz")->status == Status::Pass);
    const CheckResult* s = find(r, "chern.sign_n1");
    REQUIRE(s);
    CHECK(s->status == Status::Flag);
    bool diff_noted = false;
    for (const auto& n : s->notes) diff_noted |= n.find("8/3*omega_TZ") != std::string::npos;
    CHECK(diff_noted);
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(run_builtin("nope"), ConfigurationError); }

TEST_CASE("builtin scripts round trip") {
    for (const char* n : {"mumford", "serre"}) {
        dsl::Script s = dsl::parse(builtin_script(n));
        CHECK(dsl::same(s, dsl::parse(dsl::print(s))));
    }
}

TEST_CASE("report JSON round trips") {
    Report r = run_builtin("all");
    nlohmann::json j = r.json();
    nlohmann::json back = nlohmann::json::parse(j.dump());
    CHECK(back == j);
    torus::TorusOptions o;
    o.n = 32;
    nlohmann::json t = torus::torus_check(torus::Torus({0, 1}), o).json();
    CHECK(nlohmann::json::parse(t.dump()) == t);
}
