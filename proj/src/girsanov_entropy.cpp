#include "lagrangeflow/girsanov_entropy.hpp"

#include <cmath>

#include "lagrangeflow/action_variational.hpp"
#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/parallel.hpp"

namespace lagrangeflow {

namespace {

template <class PerPath>
std::vector<double> per_path(const PathEnsemble& ens, PerPath&& f) {
    std::vector<double> out(ens.paths());
    const auto np = static_cast<long long>(ens.paths());
    ExceptionRelay relay;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        relay.run([&] { out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i)); });
    }
    relay.rethrow();
    return out;
}

void require_same_grid(const PathEnsemble& a, const PathEnsemble& b, std::string_view op) {
    if (!(a.grid() == b.grid())) throw ContractViolation(std::string(op) + ": ensembles use different grids");
}

}  // namespace

std::vector<double> log_density_pu(const FlowCase& fc, const PathEnsemble& ens) {
    const auto& grid = ens.grid();
    const double dt = grid.dt();
    return per_path(ens, [&](std::size_t n) {
        double ito = 0.0, energy = 0.0;
        for (std::size_t k = 0; k < grid.steps(); ++k) {
            const Vec3& x = ens.position(n, k);
            const Vec3 u = fc.velocity->eval(1.0 - grid.t(k), x);
            ito += dot(u, ens.position(n, k + 1) - x);
            energy += dot(u, u) * dt;
        }
        return -ito - 0.5 * energy;
    });
}

std::vector<double> pressure_integral(const FlowCase& fc, const PathEnsemble& ens) {
    const auto& grid = ens.grid();
    const double dt = grid.dt();
    return per_path(ens, [&](std::size_t n) {
        double s = 0.0;
        for (std::size_t k = 0; k < grid.steps(); ++k) s += fc.pressure->eval(1.0 - grid.t(k), ens.position(n, k)) * dt;
        return s;
    });
}

std::vector<double> kinetic_integral(const FlowCase& fc, const PathEnsemble& ens) {
    const auto& grid = ens.grid();
    const double dt = grid.dt();
    return per_path(ens, [&](std::size_t n) {
        double s = 0.0;
        for (std::size_t k = 0; k < grid.steps(); ++k) {
            const Vec3 u = fc.velocity->eval(1.0 - grid.t(k), ens.position(n, k));
            s += dot(u, u) * dt;
        }
        return 0.5 * s;
    });
}

EstimateWithError estimate_Zp(const FlowCase& fc, const PathEnsemble& wiener) {
    require_wiener(wiener, "estimate_Zp");
    auto w = pressure_integral(fc, wiener);
    for (double& x : w) x = std::exp(x);
    return estimate_mean(w);
}

EstimateWithError girsanov_normalization(const FlowCase& fc, const PathEnsemble& wiener) {
    require_wiener(wiener, "girsanov_normalization");
    auto w = log_density_pu(fc, wiener);
    for (double& x : w) x = std::exp(x);
    return estimate_mean(w);
}

EstimateWithError relative_entropy(const FlowCase& fc, const PathEnsemble& pu, const PathEnsemble& wiener) {
    require_pu(fc, pu, "relative_entropy");
    require_wiener(wiener, "relative_entropy");
    require_same_grid(pu, wiener, "relative_entropy");
    auto terms = log_density_pu(fc, pu);
    const auto pint = pressure_integral(fc, pu);
    for (std::size_t n = 0; n < terms.size(); ++n) terms[n] -= pint[n];
    const auto paired = estimate_mean(terms);
    const auto z = estimate_Zp(fc, wiener);
    const double se_log_z = z.std_error / z.value;
    return {paired.value + std::log(z.value), std::hypot(paired.std_error, se_log_z), paired.n_samples};
}

ActionEntropyReport action_entropy_identity(const FlowCase& fc, const PathEnsemble& pu, const PathEnsemble& wiener) {
    require_pu(fc, pu, "action_entropy_identity");
    require_wiener(wiener, "action_entropy_identity");
    require_same_grid(pu, wiener, "action_entropy_identity");

    ActionEntropyReport r;
    r.action = stochastic_action(fc, pu);
    r.entropy = relative_entropy(fc, pu, wiener);
    const auto z = estimate_Zp(fc, wiener);
    r.log_Z = {std::log(z.value), z.std_error / z.value, z.n_samples};
    r.residual_minus = r.action.value - (r.entropy.value - r.log_Z.value);
    r.residual_plus = r.action.value - (r.entropy.value + r.log_Z.value);

    // Per path: (|v|^2/2 - p) - (L - p) = kinetic - L.
    const auto kin = kinetic_integral(fc, pu);
    auto diff = log_density_pu(fc, pu);
    for (std::size_t n = 0; n < diff.size(); ++n) diff[n] = kin[n] - diff[n];
    r.residual_std_error = estimate_mean(diff).std_error;
    r.tolerance = 3.0 * r.residual_std_error + 2.0 / static_cast<double>(pu.grid().steps());
    r.minus_holds = std::fabs(r.residual_minus) <= r.tolerance;
    return r;
}

}  // namespace lagrangeflow
