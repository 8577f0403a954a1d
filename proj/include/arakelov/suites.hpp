#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arakelov/dsl.hpp"

namespace arakelov {

// Restricts the built-in sweeps. Unset fields keep the full range.
struct SweepFilter {
    std::optional<Regime> rules;
    std::optional<int> q;
    std::optional<int> marks;
};

// Names accepted by run_builtin: mumford, serre, boundary, chern, all.
const std::vector<std::string>& builtin_names();

// Script text of a script-backed suite (mumford, serre); empty for coded ones.
std::string builtin_script(const std::string& name);

// Throws ConfigurationError for an unknown name.
Report run_builtin(const std::string& name, const SweepFilter& filter = {});

Report boundary_suite(const SweepFilter& filter = {});
Report chern_suite(const SweepFilter& filter = {});

}  // namespace arakelov
