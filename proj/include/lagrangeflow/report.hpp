#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lagrangeflow/action_variational.hpp"
#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/girsanov_entropy.hpp"
#include "lagrangeflow/martingale_lab.hpp"
#include "lagrangeflow/noether.hpp"
#include "lagrangeflow/reduce.hpp"

namespace lagrangeflow {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "lagrangeflow.report/1";

/// Finite values as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double x);

Json to_json(const EstimateWithError& e);
Json to_json(const ProbeSummary& s);
Json to_json(const BiasProbe& b);
/// Summary only; the cell matrix goes to CSV.
Json to_json(const MartingaleTestReport& r);
Json to_json(const LeastActionReport& r);
Json to_json(const ActionEntropyReport& r);
Json to_json(const SymmetryCheckReport& r);

/// One row per (report, k): component index, t_k, then one z per test function.
void write_z_matrix_csv(std::ostream& out, const std::vector<MartingaleTestReport>& reports);

/// Two-space indented JSON plus a trailing newline.
std::string dump(const Json& j);

/// Left-aligned two-column text table.
class TextTable {
public:
    explicit TextTable(std::string title) : title_(std::move(title)) {}
    TextTable& row(std::string key, std::string value);
    std::string str() const;

private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> rows_;
};

std::string fmt(double x, int precision = 4);

}  // namespace lagrangeflow
