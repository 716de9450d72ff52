#include "lagrangeflow/flow_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/radial_pressure.hpp"

namespace lagrangeflow {

std::string_view to_string(Symmetry s) {
    switch (s) {
        case Symmetry::translation_e3: return "translation_e3";
        case Symmetry::rotation_e3: return "rotation_e3";
    }
    return "unknown";
}

namespace {

// ============================================================================
// Taylor–Green family: u_a = D cos x_a sin x_b, u_b = -D sin x_a cos x_b on the
// coordinate plane (a, b), D = e^{-t} (or 1 when frozen).
// ============================================================================

class TaylorGreenVelocity final : public VelocityField {
public:
    TaylorGreenVelocity(std::size_t a, std::size_t b, bool frozen) : a_(a), b_(b), frozen_(frozen) {}

    Vec3 eval(double t, const Vec3& x) const override {
        const double d = decay(t);
        Vec3 u;
        u[a_] = d * std::cos(x[a_]) * std::sin(x[b_]);
        u[b_] = -d * std::sin(x[a_]) * std::cos(x[b_]);
        return u;
    }
    Vec3 time_deriv(double t, const Vec3& x) const override {
        return frozen_ ? Vec3{} : -eval(t, x);
    }
    Mat3 jacobian(double t, const Vec3& x) const override {
        const double d = decay(t);
        const double ca = std::cos(x[a_]), sa = std::sin(x[a_]);
        const double cb = std::cos(x[b_]), sb = std::sin(x[b_]);
        Mat3 j;
        j(a_, a_) = -d * sa * sb;
        j(a_, b_) = d * ca * cb;
        j(b_, a_) = -d * ca * cb;
        j(b_, b_) = d * sa * sb;
        return j;
    }
    Vec3 laplacian(double t, const Vec3& x) const override { return -2.0 * eval(t, x); }
    double bound() const override { return 1.0; }

private:
    double decay(double t) const { return frozen_ ? 1.0 : std::exp(-t); }
    std::size_t a_, b_;
    bool frozen_;
};

class TaylorGreenPressure final : public PressureField {
public:
    TaylorGreenPressure(std::size_t a, std::size_t b, bool frozen) : a_(a), b_(b), frozen_(frozen) {}

    double eval(double t, const Vec3& x) const override {
        return 0.5 - decay2(t) * (std::cos(2.0 * x[a_]) + std::cos(2.0 * x[b_])) / 4.0;
    }
    Vec3 gradient(double t, const Vec3& x) const override {
        const double d2 = decay2(t);
        Vec3 g;
        g[a_] = d2 * std::sin(2.0 * x[a_]) / 2.0;
        g[b_] = d2 * std::sin(2.0 * x[b_]) / 2.0;
        return g;
    }
    double bound() const override { return 1.0; }

private:
    double decay2(double t) const { return frozen_ ? 1.0 : std::exp(-2.0 * t); }
    std::size_t a_, b_;
    bool frozen_;
};

// ============================================================================
// Lamb–Oseen vortex about e3 with nu = 1/2 and time shift t0:
//   u = g(q, tau) (-y, x, 0),  q = x^2 + y^2,  tau = t + t0,
//   g = C phi(q / (2 tau)) / (2 tau),  phi(a) = (1 - e^{-a}) / a,  C = Gamma / 2pi.
// ============================================================================

struct PhiDerivs {
    double phi, d1, d2;
};

PhiDerivs phi_derivs(double a) {
    if (a < 1.0) {
        // phi(a) = sum_k c_k a^k with c_k = (-1)^k / (k+1)!
        PhiDerivs r{0.0, 0.0, 0.0};
        double c = 1.0;
        double pw = 1.0;  // a^k
        double pw1 = 0.0, pw2 = 0.0;  // a^{k-1}, a^{k-2}
        for (int k = 0; k < 26; ++k) {
            const double kd = static_cast<double>(k);
            r.phi += c * pw;
            r.d1 += kd * c * pw1;
            r.d2 += kd * (kd - 1.0) * c * pw2;
            pw2 = pw1;
            pw1 = pw;
            pw *= a;
            c /= -(kd + 2.0);
        }
        return r;
    }
    const double ema = std::exp(-a);
    const double one_minus = -std::expm1(-a);
    return {one_minus / a, ema / a - one_minus / (a * a),
            -ema / a - 2.0 * ema / (a * a) + 2.0 * one_minus / (a * a * a)};
}

class LambOseenVelocity final : public VelocityField {
public:
    LambOseenVelocity(double circulation, double t0) : c_(circulation / (2.0 * std::numbers::pi)), t0_(t0) {
        bound_ = scan_bound();
    }

    Vec3 eval(double t, const Vec3& x) const override {
        const double g = profile(t, x).g;
        return {-g * x[1], g * x[0], 0.0};
    }
    Vec3 time_deriv(double t, const Vec3& x) const override {
        const double dg = profile(t, x).dg_dtau;
        return {-dg * x[1], dg * x[0], 0.0};
    }
    Mat3 jacobian(double t, const Vec3& x) const override {
        const auto p = profile(t, x);
        const double gp2 = 2.0 * p.dg_dq;
        Mat3 j;
        j(0, 0) = -gp2 * x[0] * x[1];
        j(0, 1) = -p.g - gp2 * x[1] * x[1];
        j(1, 0) = p.g + gp2 * x[0] * x[0];
        j(1, 1) = gp2 * x[0] * x[1];
        return j;
    }
    Vec3 laplacian(double t, const Vec3& x) const override {
        const auto p = profile(t, x);
        const double s = 8.0 * p.dg_dq + 4.0 * p.q * p.d2g_dq2;
        return {-s * x[1], s * x[0], 0.0};
    }
    Vec3 curl(double t, const Vec3& x) const override {
        // g + q g' = C e^{-a} / (2 tau)
        const double tau = t + t0_;
        const double a = (x[0] * x[0] + x[1] * x[1]) / (2.0 * tau);
        return {0.0, 0.0, c_ * std::exp(-a) / tau};
    }
    double bound() const override { return bound_; }

    /// g(q, tau)^2, so that grad p = g^2 (x, y, 0).
    double g_squared(double t, const Vec3& x) const {
        const double g = profile(t, x).g;
        return g * g;
    }

private:
    struct Profile {
        double q, g, dg_dq, d2g_dq2, dg_dtau;
    };

    Profile profile(double t, const Vec3& x) const {
        const double tau = t + t0_;
        const double q = x[0] * x[0] + x[1] * x[1];
        const double a = q / (2.0 * tau);
        const auto ph = phi_derivs(a);
        const double s = c_ / (2.0 * tau);
        const double ds = 1.0 / (2.0 * tau);
        return {q, s * ph.phi, s * ph.d1 * ds, s * ph.d2 * ds * ds,
                -c_ / (2.0 * tau * tau) * (ph.phi + a * ph.d1)};
    }

    double scan_bound() const {
        double b = 0.0;
        const double reach = 20.0 * std::sqrt(2.0 * (1.0 + t0_));
        for (int i = 0; i <= 4000; ++i) {
            const double r = reach * i / 4000.0;
            for (double t : {0.0, 1.0}) {
                for (const Vec3& x : {Vec3{r, 0.0, 0.0}, Vec3{r / std::sqrt(2.0), r / std::sqrt(2.0), 0.0}}) {
                    b = std::max(b, norm(eval(t, x)));
                    const Mat3 j = jacobian(t, x);
                    for (double e : j.a) b = std::max(b, std::fabs(e));
                }
            }
        }
        return b * 1.01;
    }

    double c_, t0_;
    double bound_ = 0.0;
};

class LambOseenPressure final : public PressureField {
public:
    LambOseenPressure(std::shared_ptr<const LambOseenVelocity> u, double circulation, double t0)
        : u_(std::move(u)), c_(circulation / (2.0 * std::numbers::pi)), t0_(t0) {}

    double eval(double t, const Vec3& x) const override {
        const double tau = t + t0_;
        const double w = (x[0] * x[0] + x[1] * x[1]) / (2.0 * tau);
        return c_ * c_ / (4.0 * tau) * profile_(w);
    }
    Vec3 gradient(double t, const Vec3& x) const override {
        const double g2 = u_->g_squared(t, x);
        return {g2 * x[0], g2 * x[1], 0.0};
    }
    double bound() const override { return c_ * c_ / (4.0 * t0_) * VortexPressureProfile::limit(); }

private:
    std::shared_ptr<const LambOseenVelocity> u_;
    double c_, t0_;
    VortexPressureProfile profile_;
};

// ============================================================================
// Constant fields
// ============================================================================

class ZeroVelocity final : public VelocityField {
public:
    Vec3 eval(double, const Vec3&) const override { return {}; }
    Vec3 time_deriv(double, const Vec3&) const override { return {}; }
    Mat3 jacobian(double, const Vec3&) const override { return {}; }
    Vec3 laplacian(double, const Vec3&) const override { return {}; }
    double bound() const override { return 1.0; }
};

class ConstantPressure final : public PressureField {
public:
    explicit ConstantPressure(double c) : c_(c) {}
    double eval(double, const Vec3&) const override { return c_; }
    Vec3 gradient(double, const Vec3&) const override { return {}; }
    double bound() const override { return std::max(c_, 1e-300); }

private:
    double c_;
};

class ShiftedPressure final : public PressureField {
public:
    ShiftedPressure(std::shared_ptr<const PressureField> base, double shift)
        : base_(std::move(base)), shift_(shift) {}
    double eval(double t, const Vec3& x) const override { return base_->eval(t, x) + shift_; }
    Vec3 gradient(double t, const Vec3& x) const override { return base_->gradient(t, x); }
    double bound() const override { return base_->bound() + std::fabs(shift_); }

private:
    std::shared_ptr<const PressureField> base_;
    double shift_;
};

}  // namespace

// ============================================================================
// Residuals
// ============================================================================

Residual ns_residual(const FlowCase& fc, double t, const Vec3& x) {
    const Vec3 u = fc.velocity->eval(t, x);
    const Mat3 j = fc.velocity->jacobian(t, x);
    const Vec3 adv = j * u;
    const Vec3 r = fc.velocity->time_deriv(t, x) + adv + fc.pressure->gradient(t, x) -
                   0.5 * fc.velocity->laplacian(t, x);
    return {r, j.trace()};
}

Vec3 fd_residual_oracle(const FlowCase& fc, double t, const Vec3& x, double step) {
    const auto& u = *fc.velocity;
    const auto& p = *fc.pressure;
    const double h = step;

    Vec3 dudt;
    if (t - h < 0.0) {
        dudt = (-3.0 * u.eval(t, x) + 4.0 * u.eval(t + h, x) - u.eval(t + 2.0 * h, x)) * (1.0 / (2.0 * h));
    } else if (t + h > 1.0) {
        dudt = (3.0 * u.eval(t, x) - 4.0 * u.eval(t - h, x) + u.eval(t - 2.0 * h, x)) * (1.0 / (2.0 * h));
    } else {
        dudt = (u.eval(t + h, x) - u.eval(t - h, x)) * (1.0 / (2.0 * h));
    }

    const Vec3 u0 = u.eval(t, x);
    Vec3 adv, grad_p, lap;
    for (std::size_t j = 0; j < 3; ++j) {
        Vec3 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vec3 up = u.eval(t, xp), um = u.eval(t, xm);
        adv += ((up - um) * (1.0 / (2.0 * h))) * u0[j];
        lap += (up - 2.0 * u0 + um) * (1.0 / (h * h));
        grad_p[j] = (p.eval(t, xp) - p.eval(t, xm)) / (2.0 * h);
    }
    return dudt + adv + grad_p - 0.5 * lap;
}

// ============================================================================
// Catalog
// ============================================================================

FlowCase make_taylor_green() {
    return {"taylor_green", std::make_shared<TaylorGreenVelocity>(0, 1, false),
            std::make_shared<TaylorGreenPressure>(0, 1, false), true, {Symmetry::translation_e3}, 1e-8};
}

FlowCase make_frozen_taylor_green() {
    return {"frozen_taylor_green", std::make_shared<TaylorGreenVelocity>(0, 1, true),
            std::make_shared<TaylorGreenPressure>(0, 1, true), false, {Symmetry::translation_e3}, 1e-8};
}

FlowCase make_taylor_green_xz() {
    return {"taylor_green_xz", std::make_shared<TaylorGreenVelocity>(0, 2, false),
            std::make_shared<TaylorGreenPressure>(0, 2, false), true, {}, 1e-8};
}

FlowCase make_lamb_oseen(double circulation, double t0) {
    if (!(t0 > 0.0)) throw ContractViolation("lamb_oseen: t0 must be positive");
    auto u = std::make_shared<LambOseenVelocity>(circulation, t0);
    auto p = std::make_shared<LambOseenPressure>(u, circulation, t0);
    return {"lamb_oseen", u, p, true, {Symmetry::rotation_e3, Symmetry::translation_e3}, 1e-8};
}

FlowCase make_zero_flow(double pressure_const) {
    if (!(pressure_const >= 0.0)) throw ContractViolation("zero_flow: pressure must be nonnegative");
    return {"zero_flow", std::make_shared<ZeroVelocity>(), std::make_shared<ConstantPressure>(pressure_const),
            true, {Symmetry::translation_e3, Symmetry::rotation_e3}, 1e-8};
}

FlowCase with_pressure_shift(const FlowCase& fc, double shift) {
    FlowCase out = fc;
    out.pressure = std::make_shared<ShiftedPressure>(fc.pressure, shift);
    return out;
}

std::vector<std::string> catalog_names() {
    return {"taylor_green", "frozen_taylor_green", "taylor_green_xz", "lamb_oseen", "zero_flow"};
}

FlowCase make_case(std::string_view name) {
    if (name == "taylor_green") return make_taylor_green();
    if (name == "frozen_taylor_green") return make_frozen_taylor_green();
    if (name == "taylor_green_xz") return make_taylor_green_xz();
    if (name == "lamb_oseen") return make_lamb_oseen();
    if (name == "zero_flow") return make_zero_flow();
    throw UnknownName("unknown case '" + std::string(name) + "'");
}

std::vector<ProbePoint> probe_grid(int points) {
    std::vector<ProbePoint> out;
    const int n = std::max(points, 2);
    auto lin = [n](double lo, double hi, int i) { return lo + (hi - lo) * i / (n - 1); };
    const double pi = std::numbers::pi;
    out.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int it = 0; it < n; ++it)
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz)
                    out.push_back({lin(0.0, 1.0, it), {lin(-pi, pi, ix), lin(-pi, pi, iy), lin(-pi, pi, iz)}});
    return out;
}

ProbeSummary probe_case(const FlowCase& fc, int points, double fd_step) {
    ProbeSummary s;
    s.min_pressure = std::numeric_limits<double>::infinity();
    for (const auto& pt : probe_grid(points)) {
        const auto r = ns_residual(fc, pt.t, pt.x);
        const Vec3 fd = fd_residual_oracle(fc, pt.t, pt.x, fd_step);
        s.max_residual = std::max(s.max_residual, max_abs(r.momentum));
        s.max_divergence = std::max(s.max_divergence, std::fabs(r.divergence));
        s.max_fd_gap = std::max(s.max_fd_gap, max_abs(r.momentum - fd));
        s.min_pressure = std::min(s.min_pressure, fc.pressure->eval(pt.t, pt.x));
        s.max_speed = std::max(s.max_speed, norm(fc.velocity->eval(pt.t, pt.x)));
    }
    return s;
}

}  // namespace lagrangeflow
