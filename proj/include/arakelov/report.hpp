#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace arakelov {

enum class Status { Pass, Fail, Flag };

std::string status_name(Status s);

/// One failing (or noted) instantiation of a check.
struct Instance {
    std::string context;                   // e.g. "q=2 N=1 rules=adjunction"
    std::map<std::string, long> bindings;  // quantifier values
    std::string diff;
    std::string error;
};

struct CheckResult {
    std::string id;  // "check@L:C" for scripts, "boundary.a" for coded suites
    int line = 0, col = 0;
    std::string label;
    Status status = Status::Pass;
    size_t instances = 0;
    std::vector<Instance> failures;
    std::vector<std::string> notes;

    void record(bool ok, Instance inst);
};

struct Report {
    std::string title;
    std::vector<CheckResult> checks;

    bool ok() const;  // flags do not count as failures
    size_t count(Status s) const;
    void append(const Report& o);

    std::string text() const;
    nlohmann::json json() const;
};

}  // namespace arakelov
