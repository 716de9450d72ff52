#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/experiments.hpp"
#include "lagrangeflow/parallel.hpp"

namespace lagrangeflow {
namespace {

ExperimentConfig small(std::string name) {
    ExperimentConfig cfg;
    cfg.case_name = std::move(name);
    cfg.N = 1500;
    cfg.M = 30;
    return cfg;
}

// ============================================================================
// Config validation
// ============================================================================

TEST(Config, DefaultsAreValid) {
    for (const auto& command : command_names()) EXPECT_NO_THROW(ExperimentConfig{}.validate(command)) << command;
}

TEST(Config, FieldSpecificErrors) {
    auto expect_field = [](ExperimentConfig cfg, const std::string& field) {
        try {
            cfg.validate("el-test");
            ADD_FAILURE() << "no error for " << field;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field, field);
        }
    };
    ExperimentConfig c;
    c.N = 0;
    expect_field(c, "N");
    c = {};
    c.M = 1;
    expect_field(c, "M");
    c = {};
    c.alpha = 1.5;
    expect_field(c, "alpha");
    c = {};
    c.eps = 0.5;
    expect_field(c, "eps");
    c = {};
    c.dictionary = "everything";
    expect_field(c, "dictionary");
    c = {};
    c.grid = 1;
    expect_field(c, "grid");
}

TEST(Config, UnknownNames) {
    auto c = small("nope");
    EXPECT_THROW(c.validate("el-test"), UnknownName);
    EXPECT_NO_THROW(c.validate("catalog"));
    c = small("lamb_oseen");
    c.generator = "scaling";
    EXPECT_THROW(c.validate("noether"), UnknownName);
}

TEST(Config, CriteriaList) {
    ExperimentConfig c;
    EXPECT_EQ(c.criteria_list().size(), 9u);
    c.criteria = "7,1,7";
    EXPECT_EQ(c.criteria_list(), (std::vector<int>{1, 7}));
    c.criteria = "10";
    EXPECT_THROW(c.criteria_list(), ConfigError);
    c.criteria = "2x";
    EXPECT_THROW(c.criteria_list(), ConfigError);
}

TEST(Config, JsonCarriesEveryField) {
    const auto j = ExperimentConfig{}.to_json();
    for (const char* key : {"case", "N", "M", "seed", "alpha", "generator", "dictionary", "eps",
                            "ablate_compensator", "bias_probe", "grid", "criteria"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
}

// ============================================================================
// Commands
// ============================================================================

TEST(Commands, ReportsCarrySchemaAndConfig) {
    const auto r = run_command("residual", small("taylor_green"));
    EXPECT_EQ(r.report["schema"], kSchemaVersion);
    EXPECT_EQ(r.report["config"]["case"], "taylor_green");
    EXPECT_TRUE(r.report["within_tolerance"].get<bool>());
    EXPECT_FALSE(r.table.empty());
}

TEST(Commands, SymmetryGateRefuses) {
    auto cfg = small("taylor_green");
    cfg.generator = "rotation_e3";
    const auto r = run_command("noether", cfg);
    EXPECT_EQ(r.exit_code, kExitSymmetryGate);
    EXPECT_EQ(r.report["verdict"], "refused");
    EXPECT_GE(r.report["symmetry"]["max_pressure_violation"].get<double>(), 0.1);
}

TEST(Commands, ElTestNegativeControl) {
    auto cfg = small("frozen_taylor_green");
    cfg.N = 20000;
    cfg.M = 50;
    const auto r = run_command("el-test", cfg);
    EXPECT_EQ(r.report["verdict"], "fail");
    EXPECT_EQ(r.report["components"].size(), 3u);
}

TEST(Commands, DictionarySelection) {
    auto cfg = small("taylor_green");
    cfg.dictionary = "gated";
    EXPECT_EQ(run_command("least-action", cfg).report["check"]["entries"].size(), 3u);
    cfg.dictionary = "deterministic";
    EXPECT_EQ(run_command("least-action", cfg).report["check"]["entries"].size(), 6u);
}

TEST(Commands, JsonIdenticalAcrossRepeatsAndWorkers) {
    auto cfg = small("lamb_oseen");
    cfg.bias_probe = true;
    for (const char* command : {"el-test", "action", "least-action", "noether"}) {
        std::string one, again, eight;
        {
            const ScopedWorkers w(1);
            one = dump(run_command(command, cfg).report);
            again = dump(run_command(command, cfg).report);
        }
        {
            const ScopedWorkers w(8);
            eight = dump(run_command(command, cfg).report);
        }
        EXPECT_EQ(one, again) << command;
        EXPECT_EQ(one, eight) << command;
    }
}

TEST(Commands, SuiteSubsetAndExitCode) {
    auto cfg = small("taylor_green");
    cfg.criteria = "1";
    const auto r = run_command("suite", cfg);
    EXPECT_EQ(r.exit_code, 0);
    ASSERT_EQ(r.report["criteria"].size(), 1u);
    EXPECT_EQ(r.report["criteria"][0]["verdict"], "pass");
}

TEST(Commands, UnknownCommand) { EXPECT_THROW(run_command("plot", ExperimentConfig{}), UnknownName); }

// ============================================================================
// Report helpers
// ============================================================================

TEST(Report, NonFiniteNumbersBecomeStrings) {
    EXPECT_EQ(number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(number(0.25), 0.25);
}

TEST(Report, ZMatrixCsvLayout) {
    MartingaleTestReport r;
    r.functions = {"1", "X1"};
    r.J = 2;
    r.M_used = 2;
    r.cells = {{0, 0, 1.5}, {0, 0, -2.0}, {0, 0, 0.0}, {0, 0, std::numeric_limits<double>::infinity()}};
    std::ostringstream os;
    write_z_matrix_csv(os, {r});
    EXPECT_EQ(os.str(), "component,t,1,X1\n0,0,1.5,-2\n0,0.5,0,inf\n");
}

TEST(Report, TextTableAligns) {
    const auto s = TextTable("title").row("a", "1").row("long key", "2").str();
    EXPECT_EQ(s, "title\n  a         1\n  long key  2\n");
}

}  // namespace
}  // namespace lagrangeflow
