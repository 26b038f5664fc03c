#pragma once

// Scenario dispatch for the qlab command-line tool.
//
// Trial i of a run uses Rng(derive_seed(master_seed, i)), so results depend
// only on the configuration and never on the worker count or scheduling.
// Reports are assembled in trial order.

#include <string>
#include <vector>

#include "qlab/config.hpp"

namespace qlab::scenario {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProtocolFailure = 1;
inline constexpr int kExitConfigError = 2;

struct ScenarioInfo {
    std::string name;
    std::string summary;
    std::vector<config::Param> params;
};

const std::vector<ScenarioInfo>& scenarios();

/// Throws ConfigError for an unknown name.
const ScenarioInfo& find(const std::string& name);

struct RunReport {
    std::string text;
    int exit_code{kExitOk};
};

/// Runs the scenario. Invalid settings, including values a module rejects
/// as out of domain, raise ConfigError.
RunReport run(const std::string& name, const config::KeyValues& values);

}  // namespace qlab::scenario
