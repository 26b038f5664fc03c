// qlab: run one protocol scenario and print its report.
//
//   qlab [--config FILE] [--set key=value]... [--seed N] [--workers N]
//        <scenario> [--<key> value]...
//
// Settings are layered: config file, then QLAB_MASTER_SEED, then --set,
// then --seed/--workers and the scenario's own flags.
// Exit status: 0 success, 1 protocol failure, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qlab/config.hpp"
#include "qlab/errors.hpp"
#include "qlab/scenario.hpp"

namespace {

using qlab::scenario::kExitConfigError;
using qlab::scenario::kExitProtocolFailure;

struct Subcommand {
    CLI::App* app;
    std::string scenario;
    std::map<std::string, std::string> flags;
};

void add_flags(Subcommand& sub, const qlab::scenario::ScenarioInfo& info) {
    for (const auto& p : info.params) {
        std::string names = "--" + p.key;
        if (p.key.find('_') != std::string::npos) {
            std::string dashed = p.key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            names += ",--" + dashed;
        }
        const std::string help = p.help + (p.default_value ? " (default " + *p.default_value + ")" : " (required)");
        sub.app->add_option(names, sub.flags[p.key], help);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlab: key-agreement protocol laboratory"};
    app.require_subcommand(1);
    std::string config_path, output_path;
    std::vector<std::string> assignments;
    std::string seed, workers;
    app.add_option("--config", config_path, "flat key = value file");
    app.add_option("--set", assignments, "override one setting, key=value");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--workers", workers, "worker threads");
    app.add_option("--output", output_path, "write the report here instead of stdout");

    std::vector<Subcommand> subs;
    subs.reserve(qlab::scenario::scenarios().size() + 2);
    for (const auto& info : qlab::scenario::scenarios()) {
        subs.push_back({app.add_subcommand(info.name, info.summary), info.name, {}});
        add_flags(subs.back(), info);
    }
    // "qwalk search" and "qwalk sweep" spell qwalk-search and qwalk-sweep.
    auto* qwalk = app.add_subcommand("qwalk", "coined quantum walk experiments");
    qwalk->require_subcommand(1);
    for (const char* leaf : {"search", "sweep"}) {
        const auto& info = qlab::scenario::find(std::string("qwalk-") + leaf);
        subs.push_back({qwalk->add_subcommand(leaf, info.summary), info.name, {}});
        add_flags(subs.back(), info);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        qlab::config::KeyValues values;
        if (!config_path.empty()) values = qlab::config::parse_file(config_path);
        if (const char* env = std::getenv("QLAB_MASTER_SEED")) values["master_seed"] = env;
        for (const auto& a : assignments) {
            auto [k, v] = qlab::config::parse_assignment(a);
            values[k] = v;
        }
        if (!seed.empty()) values["master_seed"] = seed;
        if (!workers.empty()) values["workers"] = workers;

        const Subcommand* chosen = nullptr;
        for (const auto& s : subs) {
            if (s.app->parsed()) chosen = &s;
        }
        if (!chosen) throw qlab::ConfigError("no scenario given");
        for (const auto& [key, value] : chosen->flags) {
            if (chosen->app->count("--" + key) > 0) values[key] = value;
        }

        const auto report = qlab::scenario::run(chosen->scenario, values);
        if (output_path.empty()) {
            std::cout << report.text;
        } else {
            std::ofstream out(output_path);
            if (!out) throw qlab::ConfigError("cannot write " + output_path);
            out << report.text;
        }
        return report.exit_code;
    } catch (const qlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "protocol failure: " << e.what() << "\n";
        return kExitProtocolFailure;
    }
}
