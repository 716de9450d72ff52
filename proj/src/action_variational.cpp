#include "lagrangeflow/action_variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/martingale_lab.hpp"
#include "lagrangeflow/parallel.hpp"

namespace lagrangeflow {

namespace {

constexpr double kPi = std::numbers::pi;

double time_of(const TimeGrid& grid, std::span<const Vec3> history) { return grid.t(history.size() - 1); }

std::string vec_name(const Vec3& c) {
    if (c == e1) return "e1";
    if (c == e2) return "e2";
    if (c == e3) return "e3";
    return "(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
}

double trapezoid_weight(const TimeGrid& grid, std::size_t k) {
    return (k == 0 || k == grid.steps()) ? 0.5 * grid.dt() : grid.dt();
}

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

struct DerivativeTerms {
    std::vector<std::vector<double>> analytic, fd;  // [entry][path]
};

DerivativeTerms derivative_terms(const FlowCase& fc, const PathEnsemble& pu,
                                 const std::vector<PerturbationField>& dictionary, bool with_fd, double eps) {
    const auto& grid = pu.grid();
    const std::size_t entries = dictionary.size();
    DerivativeTerms out{std::vector<std::vector<double>>(entries, std::vector<double>(pu.paths())),
                        std::vector<std::vector<double>>(with_fd ? entries : 0, std::vector<double>(pu.paths()))};
    const auto np = static_cast<long long>(pu.paths());
    ExceptionRelay relay;
#pragma omp parallel
    {
        std::vector<Vec3> v(grid.points()), grad(grid.points());
#pragma omp for schedule(static)
        for (long long i = 0; i < np; ++i) relay.run([&] {
            const auto n = static_cast<std::size_t>(i);
            const auto path = pu.path(n);
            for (std::size_t k = 0; k <= grid.steps(); ++k) {
                const double t = 1.0 - grid.t(k);
                v[k] = -fc.velocity->eval(t, path[k]);
                grad[k] = fc.pressure->gradient(t, path[k]);
            }
            for (std::size_t e = 0; e < entries; ++e) {
                const auto& h = dictionary[e];
                double s = 0.0, plus = 0.0, minus = 0.0;
                for (std::size_t k = 0; k <= grid.steps(); ++k) {
                    const auto hist = path.first(k + 1);
                    const double w = trapezoid_weight(grid, k);
                    const Vec3 hk = h.h(grid, hist);
                    const Vec3 hd = h.hdot(grid, hist);
                    s += (dot(v[k], hd) - dot(grad[k], hk)) * w;
                    if (with_fd) {
                        const double t = 1.0 - grid.t(k);
                        const Vec3 vp = v[k] + eps * hd, vm = v[k] - eps * hd;
                        plus += (0.5 * dot(vp, vp) - fc.pressure->eval(t, path[k] + eps * hk)) * w;
                        minus += (0.5 * dot(vm, vm) - fc.pressure->eval(t, path[k] - eps * hk)) * w;
                    }
                }
                out.analytic[e][n] = s;
                if (with_fd) out.fd[e][n] = (plus - minus) / (2.0 * eps);
            }
        });
    }
    relay.rethrow();
    return out;
}

double z_score(const EstimateWithError& e) {
    if (e.std_error > 0.0) return e.value / e.std_error;
    if (std::fabs(e.value) < 1e-14) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), e.value);
}

}  // namespace

double sin_pi(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return s > 0.5 ? std::sin(kPi * (1.0 - s)) : std::sin(kPi * s);
}

Vec3 PerturbationField::tanh_gate(const Vec3& x) { return {std::tanh(x[0]), std::tanh(x[1]), std::tanh(x[2])}; }

PerturbationField PerturbationField::sine(const Vec3& c) {
    return PerturbationField(
        Kind::deterministic_sine, "sine:" + vec_name(c), kPi * kPi / 2.0 * dot(c, c) * 1.01,
        [c](const TimeGrid& g, std::span<const Vec3> hist) { return sin_pi(time_of(g, hist)) * c; },
        [c](const TimeGrid& g, std::span<const Vec3> hist) {
            return kPi * std::cos(kPi * time_of(g, hist)) * c;
        });
}

PerturbationField PerturbationField::bump(const Vec3& c) {
    return PerturbationField(
        Kind::deterministic_bump, "bump:" + vec_name(c), dot(c, c) / 3.0 * 1.01,
        [c](const TimeGrid& g, std::span<const Vec3> hist) {
            const double t = time_of(g, hist);
            return (t * (1.0 - t)) * c;
        },
        [c](const TimeGrid& g, std::span<const Vec3> hist) { return (1.0 - 2.0 * time_of(g, hist)) * c; });
}

PerturbationField PerturbationField::gated(double activation, Gate gate, std::string gate_name) {
    if (!(activation > 0.0 && activation < 1.0)) throw ContractViolation("gated perturbation: activation outside (0,1)");
    auto gate_index = [activation](const TimeGrid& g) {
        return static_cast<std::size_t>(std::floor(activation * static_cast<double>(g.steps())));
    };
    auto h = [gate, gate_index](const TimeGrid& g, std::span<const Vec3> hist) {
        const std::size_t k = hist.size() - 1, ka = gate_index(g);
        if (k < ka) return Vec3{};
        const double a = g.t(ka);
        return sin_pi((g.t(k) - a) / (1.0 - a)) * gate(hist[ka]);
    };
    auto hdot = [gate, gate_index](const TimeGrid& g, std::span<const Vec3> hist) {
        const std::size_t k = hist.size() - 1, ka = gate_index(g);
        if (k < ka) return Vec3{};
        const double a = g.t(ka);
        return (kPi / (1.0 - a) * std::cos(kPi * (g.t(k) - a) / (1.0 - a))) * gate(hist[ka]);
    };
    // |g| <= sqrt(3) for componentwise-bounded gates.
    const double energy = kPi * kPi * 3.0 / (2.0 * (1.0 - activation)) * 1.01;
    return PerturbationField(Kind::adapted_gated, "gated:" + gate_name + "@" + std::to_string(activation).substr(0, 4),
                             energy, h, hdot);
}

PerturbationField PerturbationField::combination(const PerturbationField& a, const PerturbationField& b) {
    const double energy = 2.0 * (a.energy_bound() + b.energy_bound());
    return PerturbationField(
        Kind::combination, a.descriptor() + "+" + b.descriptor(), energy,
        [a, b](const TimeGrid& g, std::span<const Vec3> hist) { return a.h(g, hist) + b.h(g, hist); },
        [a, b](const TimeGrid& g, std::span<const Vec3> hist) { return a.hdot(g, hist) + b.hdot(g, hist); });
}

std::vector<PerturbationField> default_dictionary() {
    std::vector<PerturbationField> d;
    for (const Vec3& c : {e1, e2, e3}) d.push_back(PerturbationField::sine(c));
    for (const Vec3& c : {e1, e2, e3}) d.push_back(PerturbationField::bump(c));
    for (double a : {0.25, 0.5, 0.75}) d.push_back(PerturbationField::gated(a));
    return d;
}

EstimateWithError stochastic_action(const FlowCase& fc, const PathEnsemble& pu) {
    require_pu(fc, pu, "stochastic_action");
    const auto& grid = pu.grid();
    const double dt = grid.dt();
    const auto vals = per_path(pu, [&](std::size_t n) {
        double s = 0.0;
        for (std::size_t k = 0; k < grid.steps(); ++k) {
            const double t = 1.0 - grid.t(k);
            const Vec3 v = -fc.velocity->eval(t, pu.position(n, k));
            s += (0.5 * dot(v, v) - fc.pressure->eval(t, pu.position(n, k))) * dt;
        }
        return s;
    });
    return estimate_mean(vals);
}

EstimateWithError action_derivative_analytic(const FlowCase& fc, const PathEnsemble& pu, const PerturbationField& h) {
    require_pu(fc, pu, "action_derivative_analytic");
    return estimate_mean(derivative_terms(fc, pu, {h}, false, 0.0).analytic[0]);
}

EstimateWithError action_derivative_fd(const FlowCase& fc, const PathEnsemble& pu, const PerturbationField& h,
                                       double eps) {
    require_pu(fc, pu, "action_derivative_fd");
    if (!(eps >= 1e-4 && eps <= 1e-1)) throw ContractViolation("action_derivative_fd: eps outside [1e-4, 1e-1]");
    return estimate_mean(derivative_terms(fc, pu, {h}, true, eps).fd[0]);
}

LeastActionReport least_action_check(const FlowCase& fc, const PathEnsemble& pu,
                                     const std::vector<PerturbationField>& dictionary, double alpha, double eps) {
    require_pu(fc, pu, "least_action_check");
    if (dictionary.empty()) throw ContractViolation("least_action_check: empty dictionary");
    if (!(eps >= 1e-4 && eps <= 1e-1)) throw ContractViolation("least_action_check: eps outside [1e-4, 1e-1]");

    LeastActionReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    rep.threshold = bonferroni_threshold(alpha, dictionary.size());
    rep.fd_all_agree = true;
    const auto terms = derivative_terms(fc, pu, dictionary, true, eps);
    for (std::size_t i = 0; i < dictionary.size(); ++i) {
        const auto& h = dictionary[i];
        const auto& a = terms.analytic[i];
        const auto& f = terms.fd[i];
        std::vector<double> gap(a.size());
        for (std::size_t n = 0; n < a.size(); ++n) gap[n] = a[n] - f[n];
        DerivativeEntry e;
        e.descriptor = h.descriptor();
        e.analytic = estimate_mean(a);
        e.fd = estimate_mean(f);
        e.z = z_score(e.analytic);
        const auto g = estimate_mean(gap);
        e.fd_gap = g.value;
        e.fd_gap_std_error = g.std_error;
        e.fd_agrees = std::fabs(g.value) <= 3.0 * g.std_error + 1e-4;
        rep.fd_all_agree = rep.fd_all_agree && e.fd_agrees;
        rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(e.z));
        rep.entries.push_back(std::move(e));
    }
    rep.critical = rep.max_abs_z <= rep.threshold;
    return rep;
}

}  // namespace lagrangeflow
