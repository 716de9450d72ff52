#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <string_view>

#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {

/// xi = d/de h^e at e = 0 and its gradient (grad(i, j) = d xi^i / d x^j).
struct GeneratorField {
    std::string name;
    std::function<Vec3(double, const Vec3&)> xi;
    std::function<Mat3(double, const Vec3&)> grad_xi;

    static GeneratorField translation_e3();
    static GeneratorField rotation_e3();
    static GeneratorField zero();
};

/// translation_e3 | rotation_e3 | zero. Throws UnknownName.
GeneratorField make_generator(std::string_view name);

/// kappa = alpha grad(xi)^T + grad(xi) alpha with alpha = I. Contracts against
/// dL/dalpha, which vanishes for the pressure Lagrangian, so theta = 0.
Mat3 kappa(const GeneratorField& gen, double t, const Vec3& x);

/// N[n,k] = v[n,k] + sum_{j<k} grad p(1 - t_j, X[n,j]) dt (3 components).
ProcessSample el_process(const FlowCase& fc, const PathEnsemble& pu);

/// I[n,k] = <xi(t_k, X_k), v_k> - sum_i [xi^i(X), v^i]_k, with the bracket from
/// products of increments on the grid. include_bracket = false leaves <xi, v>.
ProcessSample noether_process_general(const FlowCase& fc, const PathEnsemble& pu, const GeneratorField& gen,
                                      bool include_bracket = true);

/// I[n,k] = l[n,k] + sum_{j<k} (curl u)^3(1 - t_j, X[n,j]) dt, l = X^1 v^2 - X^2 v^1.
/// With include_compensator = false only l is returned.
ProcessSample noether_rotation_closed_form(const FlowCase& fc, const PathEnsemble& pu,
                                           bool include_compensator = true);

struct ProcessGap {
    double sup = 0.0;        // sup_k |mean_n (a - b)[n,k]|
    double std_error = 0.0;  // SE of that mean at the maximizing k
    std::size_t argmax_k = 0;
};

ProcessGap mean_sup_gap(const ProcessSample& a, const ProcessSample& b);

struct SymmetryCheckReport {
    std::string generator;
    double max_pressure_violation = 0.0;
    double max_speed_violation = 0.0;
    std::string grid;

    double max_violation() const { return std::max(max_pressure_violation, max_speed_violation); }
};

/// Sup over the 5^4 probe grid and e in {+-0.1, +-0.5} of |p(t, F_e x) - p(t, x)|
/// and ||u(t, F_e x)| - |u(t, x)||, F_e the translation or rotation flow.
SymmetryCheckReport symmetry_check(const FlowCase& fc, Symmetry gen);
SymmetryCheckReport symmetry_check(const FlowCase& fc, std::string_view generator_name);

/// Violations above this refuse the Noether martingale test.
inline constexpr double kSymmetryGateTolerance = 1e-6;

}  // namespace lagrangeflow
