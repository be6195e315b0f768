// lab: experiment driver for the Beurling commutator laboratory.
//
//   lab <experiment> [--config <path>] [--set key=value ...] --out <dir>
//
// The config is a single JSON document merged over the experiment defaults;
// --set patches dotted paths into it.  Exit codes: 0 all checks passed,
// 2 invariant failure, 3 configuration error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "beurlab/beurlab.hpp"

namespace {

int run(const std::string& experiment, const std::string& config_path,
        const std::vector<std::string>& overrides, const std::string& outdir) {
    using namespace beurlab;
    json user = json::object();
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "lab: cannot open config file " << config_path << "\n";
            return kExitConfigError;
        }
        try {
            is >> user;
        } catch (const json::parse_error& e) {
            std::cerr << "lab: config parse error: " << e.what() << "\n";
            return kExitConfigError;
        }
    }
    try {
        ExperimentConfig cfg = resolve_config(experiment, user, overrides);
        const int code = run_experiment(cfg, outdir);
        std::cout << "lab " << experiment << ": "
                  << (code == kExitOk ? "all checks passed" : "INVARIANT FAILURE")
                  << " (reports in " << outdir << ")\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "lab: config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ExponentMismatch& e) {
        std::cerr << "lab: config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const InvalidArgument& e) {
        std::cerr << "lab: config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "lab: invariant failure: " << e.what() << "\n";
        return kExitInvariantFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the Beurling transform, its commutators,\n"
                 "and the prescribed Jacobian problem"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string outdir = "out";

    for (const std::string name : {"identities", "regimes", "lowerbound", "jacobian", "sparse",
                                   "scaling"}) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment suite");
        sub->add_option("--config", config_path, "JSON config file (merged over defaults)");
        sub->add_option("--set", overrides, "override a config entry, e.g. --set grid.n=256");
        sub->add_option("--out", outdir, "output directory for reports");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string experiment = app.get_subcommands().front()->get_name();
    return run(experiment, config_path, overrides, outdir);
}
