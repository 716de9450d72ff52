#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lagrangeflow/report.hpp"

namespace lagrangeflow {

struct ExperimentConfig {
    std::string case_name = "taylor_green";
    std::size_t N = 50000;
    std::size_t M = 200;
    std::uint64_t seed = 7;
    double alpha = 0.01;
    std::string generator = "rotation_e3";
    std::string dictionary = "default";  // default | deterministic | gated
    double eps = 1e-2;
    bool ablate_compensator = false;
    bool bias_probe = false;
    int grid = 5;
    std::string criteria = "all";  // suite only: "all" or a comma list such as "1,4,7"

    // Output destinations; not part of the resolved config.
    std::string zcsv;

    /// Throws ConfigError (bad value) or UnknownName (case, generator).
    void validate(std::string_view command) const;
    Json to_json() const;
    std::vector<int> criteria_list() const;
};

struct CommandResult {
    Json report;
    std::string table;  // human-readable summary
    int exit_code = 0;
};

inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSymmetryGate = 3;
inline constexpr int kExitCapacity = 4;

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    Json detail;
};

inline constexpr int kCriterionCount = 9;

std::vector<std::string> command_names();

CommandResult run_catalog(const ExperimentConfig& cfg);
CommandResult run_residual(const ExperimentConfig& cfg);
CommandResult run_el_test(const ExperimentConfig& cfg);
CommandResult run_action(const ExperimentConfig& cfg);
CommandResult run_least_action(const ExperimentConfig& cfg);
CommandResult run_noether(const ExperimentConfig& cfg);
/// Exit code 1 when any selected criterion fails. `on_done` fires after each criterion.
CommandResult run_suite(const ExperimentConfig& cfg,
                        const std::function<void(const CriterionResult&)>& on_done = {});

/// Validates, then dispatches by command name.
CommandResult run_command(std::string_view command, const ExperimentConfig& cfg);

/// Runs the acceptance battery at cfg.N, cfg.M, cfg.seed, cfg.alpha.
/// `on_done` fires after each criterion.
std::vector<CriterionResult> run_acceptance(const ExperimentConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace lagrangeflow
