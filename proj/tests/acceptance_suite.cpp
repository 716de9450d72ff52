#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "lagrangeflow/experiments.hpp"
#include "lagrangeflow/parallel.hpp"

namespace {

std::string headline(const lagrangeflow::CriterionResult& c) {
    using lagrangeflow::fmt;
    const auto& d = c.detail;
    switch (c.id) {
        case 7: {
            std::string s;
            for (const auto& [name, v] : d["cases"].items()) {
                s += name + " ratio " + (v["ratio"].is_number() ? fmt(v["ratio"].get<double>(), 3) : v["ratio"].dump()) + (v["resolved"].get<bool>() ? "" : " (noise)") +
                     "; ";
            }
            return s;
        }
        case 8:
            return "false rejections " + std::to_string(d["false_rejections"].get<int>()) + "/100, drift rejected " +
                   std::to_string(d["drift_rejections"].get<int>()) + "/100";
        default:
            return {};
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace lagrangeflow;
    apply_thread_env();
    ExperimentConfig cfg;
    const char* json_path = nullptr;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--json") == 0 && i + 1 < argc) json_path = argv[++i];
        if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) cfg.criteria = argv[++i];
    }
    cfg.validate("suite");

    const auto result = run_suite(cfg, [](const CriterionResult& c) {
        std::printf("[%s] criterion %d: %s  %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    headline(c).c_str());
        std::fflush(stdout);
    });
    if (json_path != nullptr) std::ofstream(json_path) << dump(result.report);
    std::printf("%s\n", result.exit_code == 0 ? "all criteria pass" : "acceptance FAILED");
    return result.exit_code;
}
