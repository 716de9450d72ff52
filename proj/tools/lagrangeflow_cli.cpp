#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/experiments.hpp"
#include "lagrangeflow/parallel.hpp"

namespace {

constexpr int kExitInternal = 5;

const char* describe(const std::string& command) {
    if (command == "catalog") return "List flow cases with symmetry tags and solution flags";
    if (command == "residual") return "Navier-Stokes residual and divergence over the probe grid";
    if (command == "el-test") return "Martingale test of the Euler-Lagrange process, per component";
    if (command == "action") return "Stochastic action and the action-entropy identity";
    if (command == "least-action") return "Action derivative over a perturbation dictionary";
    if (command == "noether") return "Symmetry gate, then martingale test of the Noether process";
    return "Run the acceptance battery";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace lagrangeflow;
    apply_thread_env();

    CLI::App app{"lagrangeflow: Monte Carlo checks of stochastic Lagrangian flows"};
    app.fallthrough();
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "key = value file; flags given on the command line win");

    ExperimentConfig cfg;
    std::string out_path;
    app.add_option("--case,--case_name", cfg.case_name, "flow case")->capture_default_str();
    app.add_option("--N", cfg.N, "number of paths")->capture_default_str();
    app.add_option("--M", cfg.M, "time steps on [0,1]")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "family-wise significance level")->capture_default_str();
    app.add_option("--generator", cfg.generator, "translation_e3 | rotation_e3")->capture_default_str();
    app.add_option("--dictionary", cfg.dictionary, "default | deterministic | gated")->capture_default_str();
    app.add_option("--eps", cfg.eps, "finite-difference step for the action derivative")->capture_default_str();
    app.add_flag("--ablate-compensator,--ablate_compensator", cfg.ablate_compensator,
                 "drop the bracket / curl compensator from the Noether process");
    app.add_flag("--bias-probe,--bias_probe", cfg.bias_probe, "add a Richardson bias probe to el-test");
    app.add_option("--grid", cfg.grid, "probe points per axis for residual")->capture_default_str();
    app.add_option("--criteria", cfg.criteria, "suite: 'all' or a comma list of criterion ids")
        ->capture_default_str();
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");
    app.add_option("--zcsv", cfg.zcsv, "write the z-matrix of martingale tests as CSV");
    for (const auto& name : command_names()) app.add_subcommand(name, describe(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    CommandResult result;
    try {
        if (command == "suite") {
            cfg.validate(command);
            result = run_suite(cfg, [](const CriterionResult& c) {
                std::cerr << "criterion " << c.id << ": " << (c.pass ? "PASS" : "FAIL") << "  " << c.title
                          << std::endl;
            });
        } else {
            result = run_command(command, cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnknownName& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "; reduce N or M\n";
        return kExitCapacity;
    } catch (const ContractViolation& e) {
        std::cerr << "invalid request: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }

    const std::string json = dump(result.report);
    if (out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << json)) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return kExitInternal;
        }
    }
    std::cerr << result.table;
    return result.exit_code;
}
