#include "arakelov/report.hpp"

#include <sstream>

namespace arakelov {

std::string status_name(Status s) {
    switch (s) {
        case Status::Pass:
            return "PASS";
        case Status::Fail:
            return "FAIL";
        case Status::Flag:
            return "FLAG";
    }
    return "?";
}

void CheckResult::record(bool ok, Instance inst) {
    ++instances;
    if (!ok) {
        status = Status::Fail;
        failures.push_back(std::move(inst));
    }
}

bool Report::ok() const {
    for (const auto& c : checks)
        if (c.status == Status::Fail) return false;
    return true;
}

size_t Report::count(Status s) const {
    size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
}

void Report::append(const Report& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }

namespace {

std::string bindings_str(const std::map<std::string, long>& b) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : b) {
        os << (first ? "" : " ") << k << "=" << v;
        first = false;
    }
    return os.str();
}

}  // namespace

std::string Report::text() const {
    std::ostringstream os;
    if (!title.empty()) os << "# " << title << "\n";
    for (const auto& c : checks) {
        os << status_name(c.status) << " " << c.id;
        if (!c.label.empty()) os << "  " << c.label;
        os << "  (" << c.instances << (c.instances == 1 ? " instance)" : " instances)") << "\n";
        for (const auto& f : c.failures) {
            os << "    at";
            if (!f.context.empty()) os << " " << f.context;
            if (!f.bindings.empty()) os << " " << bindings_str(f.bindings);
            os << ":";
            if (!f.error.empty()) os << " error: " << f.error;
            if (!f.diff.empty()) os << " diff = " << f.diff;
            os << "\n";
        }
        for (const auto& n : c.notes) os << "    note: " << n << "\n";
    }
    os << "summary: " << count(Status::Pass) << " passed, " << count(Status::Fail) << " failed, "
       << count(Status::Flag) << " flagged\n";
    return os.str();
}

nlohmann::json Report::json() const {
    nlohmann::json j;
    j["title"] = title;
    j["ok"] = ok();
    j["passed"] = count(Status::Pass);
    j["failed"] = count(Status::Fail);
    j["flagged"] = count(Status::Flag);
    auto& arr = j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["line"] = c.line;
        jc["col"] = c.col;
        jc["label"] = c.label;
        jc["status"] = status_name(c.status);
        jc["instances"] = c.instances;
        jc["notes"] = c.notes;
        auto& fl = jc["failures"] = nlohmann::json::array();
        for (const auto& f : c.failures) {
            nlohmann::json jf;
            jf["context"] = f.context;
            jf["bindings"] = f.bindings;
            jf["diff"] = f.diff;
            jf["error"] = f.error;
            fl.push_back(jf);
        }
        arr.push_back(jc);
    }
    return j;
}

}  // namespace arakelov
