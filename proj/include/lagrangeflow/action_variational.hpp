#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/reduce.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {

/// Adapted finite-energy perturbation h with h(0) = h(1) = 0. Evaluators see
/// only the path history X[0..k], so adaptedness holds by construction.
class PerturbationField {
public:
    enum class Kind { deterministic_sine, deterministic_bump, adapted_gated, combination };
    using Gate = std::function<Vec3(const Vec3&)>;
    using Evaluator = std::function<Vec3(const TimeGrid&, std::span<const Vec3> history)>;

    /// h = sin(pi t) c
    static PerturbationField sine(const Vec3& c);
    /// h = t (1 - t) c
    static PerturbationField bump(const Vec3& c);
    /// h = 0 before the activation time a (snapped down to the grid), then
    /// sin(pi (t - a) / (1 - a)) g(X_a).
    static PerturbationField gated(double activation, Gate gate = tanh_gate, std::string gate_name = "tanh");
    static PerturbationField combination(const PerturbationField& a, const PerturbationField& b);

    static Vec3 tanh_gate(const Vec3& x);

    Kind kind() const { return kind_; }
    const std::string& descriptor() const { return descriptor_; }
    /// Upper bound on sum |hdot|^2 dt.
    double energy_bound() const { return energy_bound_; }

    /// history = X[n, 0..k]; the evaluation time is t_k with k = history.size() - 1.
    Vec3 h(const TimeGrid& grid, std::span<const Vec3> history) const { return h_(grid, history); }
    Vec3 hdot(const TimeGrid& grid, std::span<const Vec3> history) const { return hdot_(grid, history); }

private:
    PerturbationField(Kind kind, std::string descriptor, double energy, Evaluator h, Evaluator hdot)
        : kind_(kind), descriptor_(std::move(descriptor)), energy_bound_(energy), h_(std::move(h)),
          hdot_(std::move(hdot)) {}

    Kind kind_;
    std::string descriptor_;
    double energy_bound_;
    Evaluator h_, hdot_;
};

/// sin(pi s), exactly zero for s <= 0 and s >= 1.
double sin_pi(double s);

/// Sine and bump along e1, e2, e3, plus tanh-gated entries activated at 0.25, 0.5, 0.75.
std::vector<PerturbationField> default_dictionary();

/// S^p = E[sum_k (|v_k|^2 / 2 - p(1 - t_k, X_k)) dt].
EstimateWithError stochastic_action(const FlowCase& fc, const PathEnsemble& pu);

/// dS[h] = E[sum_k w_k (<v_k, hdot_k> - <grad p(1 - t_k, X_k), h_k>)], k = 0..M,
/// trapezoid weights w_0 = w_M = dt / 2, w_k = dt otherwise.
EstimateWithError action_derivative_analytic(const FlowCase& fc, const PathEnsemble& pu, const PerturbationField& h);

/// (S(+eps) - S(-eps)) / (2 eps) under X -> X + eps h, v -> v + eps hdot,
/// path by path on the same ensemble, with the trapezoid weights above.
EstimateWithError action_derivative_fd(const FlowCase& fc, const PathEnsemble& pu, const PerturbationField& h,
                                       double eps = 1e-2);

struct DerivativeEntry {
    std::string descriptor;
    EstimateWithError analytic;
    EstimateWithError fd;
    double z = 0.0;
    double fd_gap = 0.0;           // analytic - fd
    double fd_gap_std_error = 0.0;  // SE of the paired per-path difference
    bool fd_agrees = false;        // |gap| <= 3 SE + 1e-4
};

struct LeastActionReport {
    std::vector<DerivativeEntry> entries;
    double max_abs_z = 0.0;
    double threshold = 0.0;
    bool critical = false;
    bool fd_all_agree = false;
    double alpha = 0.01;
    double eps = 1e-2;
};

LeastActionReport least_action_check(const FlowCase& fc, const PathEnsemble& pu,
                                     const std::vector<PerturbationField>& dictionary, double alpha = 0.01,
                                     double eps = 1e-2);

}  // namespace lagrangeflow
