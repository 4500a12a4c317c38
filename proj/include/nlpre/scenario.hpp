// Scenario registry and runners. Each scenario couples one of the built-in
// plants with its regressor extension and estimator on a single deterministic
// clock and records a Trace.
#pragma once

#include "nlpre/config.hpp"
#include "nlpre/map.hpp"
#include "nlpre/trace.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlpre {

struct ScenarioInfo {
    std::string name;
    std::string anchor;   // stable cross-reference tag
    std::string summary;
};

const std::vector<ScenarioInfo>& scenario_list();

/// Default configuration of a registered scenario; throws ConfigError for an
/// unknown name.
Config scenario_defaults(const std::string& name);

/// The regression and parameter change a scenario estimates, honoring any
/// P_diag override in the config.
FactorizedNPRE scenario_npre(const std::string& name, const Config* config = nullptr);

struct RunResult {
    Trace trace;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> warnings;
    long singular_events = 0;
};

/// Runs a fully merged configuration and returns the trace plus summary
/// metrics (final estimation error, final tracking error, accumulated
/// excitation, singularity-event count).
RunResult run_scenario(const Config& config);

// Individual runners, dispatched by run_scenario.
RunResult run_ct_scenario(const Config& config);
RunResult run_dt_scenario(const Config& config);

}  // namespace nlpre
