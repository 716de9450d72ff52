#include "lagrangeflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace lagrangeflow {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json to_json(const EstimateWithError& e) {
    return {{"value", number(e.value)}, {"std_error", number(e.std_error)}, {"n", e.n_samples}};
}

Json to_json(const ProbeSummary& s) {
    return {{"max_residual", number(s.max_residual)},
            {"max_divergence", number(s.max_divergence)},
            {"max_fd_gap", number(s.max_fd_gap)},
            {"min_pressure", number(s.min_pressure)},
            {"max_speed", number(s.max_speed)}};
}

Json to_json(const BiasProbe& b) {
    return {{"steps_coarse", b.steps_coarse},
            {"steps_fine", 2 * b.steps_coarse},
            {"cell", b.cell},
            {"bias_coarse", number(b.bias_coarse)},
            {"se_coarse", number(b.se_coarse)},
            {"bias_fine", number(b.bias_fine)},
            {"se_fine", number(b.se_fine)},
            {"ratio", number(b.ratio)},
            {"noise_dominated", b.noise_dominated}};
}

Json to_json(const MartingaleTestReport& r) {
    Json j{{"process", r.label},
           {"functions", r.functions},
           {"J", r.J},
           {"M_used", r.M_used},
           {"alpha", number(r.alpha)},
           {"threshold", number(r.threshold)},
           {"max_abs_z", number(r.max_abs_z)},
           {"argmax", {{"k", r.argmax_k}, {"function", r.functions.at(r.argmax_j)}}},
           {"final_cell_max_abs_z", number(r.final_cell_max_abs_z)},
           {"verdict", r.pass ? "pass" : "fail"}};
    if (r.bias_probe) j["bias_probe"] = to_json(*r.bias_probe);
    return j;
}

Json to_json(const LeastActionReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"perturbation", e.descriptor},
                           {"analytic", to_json(e.analytic)},
                           {"fd", to_json(e.fd)},
                           {"z", number(e.z)},
                           {"fd_gap", number(e.fd_gap)},
                           {"fd_gap_std_error", number(e.fd_gap_std_error)},
                           {"fd_agrees", e.fd_agrees}});
    }
    return {{"alpha", number(r.alpha)},
            {"eps", number(r.eps)},
            {"threshold", number(r.threshold)},
            {"max_abs_z", number(r.max_abs_z)},
            {"fd_all_agree", r.fd_all_agree},
            {"verdict", r.critical ? "critical" : "not critical"},
            {"entries", entries}};
}

Json to_json(const ActionEntropyReport& r) {
    return {{"action", to_json(r.action)},
            {"entropy", to_json(r.entropy)},
            {"log_Z", to_json(r.log_Z)},
            {"residual_minus", number(r.residual_minus)},
            {"residual_plus", number(r.residual_plus)},
            {"residual_std_error", number(r.residual_std_error)},
            {"tolerance", number(r.tolerance)},
            {"minus_holds", r.minus_holds}};
}

Json to_json(const SymmetryCheckReport& r) {
    return {{"generator", r.generator},
            {"grid", r.grid},
            {"max_pressure_violation", number(r.max_pressure_violation)},
            {"max_speed_violation", number(r.max_speed_violation)},
            {"tolerance", number(kSymmetryGateTolerance)},
            {"holds", r.max_violation() <= kSymmetryGateTolerance}};
}

void write_z_matrix_csv(std::ostream& out, const std::vector<MartingaleTestReport>& reports) {
    if (reports.empty()) return;
    out << "component,t";
    for (const auto& f : reports.front().functions) out << ',' << f;
    out << '\n';
    char buf[32];
    for (std::size_t c = 0; c < reports.size(); ++c) {
        const auto& r = reports[c];
        for (std::size_t k = 0; k < r.M_used; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(k) / static_cast<double>(r.M_used));
            out << c << ',' << buf;
            for (std::size_t j = 0; j < r.J; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", r.cell(j, k).z);
                out << ',' << buf;
            }
            out << '\n';
        }
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

TextTable& TextTable::row(std::string key, std::string value) {
    rows_.emplace_back(std::move(key), std::move(value));
    return *this;
}

std::string TextTable::str() const {
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    std::ostringstream os;
    os << title_ << '\n';
    for (const auto& [k, v] : rows_) os << "  " << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    return os.str();
}

std::string fmt(double x, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

}  // namespace lagrangeflow
