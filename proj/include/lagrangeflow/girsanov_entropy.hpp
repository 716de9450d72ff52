#pragma once

#include <vector>

#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/reduce.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {

/// Left-point discretization of ln dP_u/dmu along each path:
///   L[n] = -sum_k u(1-t_k, X_k).(X_{k+1} - X_k) - 1/2 sum_k |u(1-t_k, X_k)|^2 dt.
/// A path functional: valid on any ensemble.
std::vector<double> log_density_pu(const FlowCase& fc, const PathEnsemble& ens);

/// Per-path sum_k p(1 - t_k, X_k) dt.
std::vector<double> pressure_integral(const FlowCase& fc, const PathEnsemble& ens);

/// Per-path sum_k |u(1 - t_k, X_k)|^2 dt / 2.
std::vector<double> kinetic_integral(const FlowCase& fc, const PathEnsemble& ens);

/// Z_p = E_mu[exp(sum_k p(1 - t_k, X_k) dt)] on a Wiener ensemble.
EstimateWithError estimate_Zp(const FlowCase& fc, const PathEnsemble& wiener);

/// E_mu[exp L] on a Wiener ensemble; 1 up to Monte Carlo error.
EstimateWithError girsanov_normalization(const FlowCase& fc, const PathEnsemble& wiener);

/// H(P_u | mu_p) = E_{P_u}[L] - E_{P_u}[sum p dt] + ln Z_p. The first two
/// terms are estimated jointly per path; SE(ln Z) = SE(Z)/Z is added in quadrature.
EstimateWithError relative_entropy(const FlowCase& fc, const PathEnsemble& pu, const PathEnsemble& wiener);

struct ActionEntropyReport {
    EstimateWithError action;   // S^p(P_u)
    EstimateWithError entropy;  // H(P_u | mu_p)
    EstimateWithError log_Z;
    double residual_minus = 0.0;  // S - (H - ln Z)
    double residual_plus = 0.0;   // S - (H + ln Z)
    /// SE of residual_minus. The action and the entropy's P_u terms are
    /// paired per path (common random numbers); ln Z enters both with opposite
    /// signs and cancels.
    double residual_std_error = 0.0;
    double tolerance = 0.0;  // 3 * residual SE + 2 / M
    bool minus_holds = false;
};

ActionEntropyReport action_entropy_identity(const FlowCase& fc, const PathEnsemble& pu, const PathEnsemble& wiener);

}  // namespace lagrangeflow
