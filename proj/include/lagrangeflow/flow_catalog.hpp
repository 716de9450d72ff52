#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lagrangeflow/vec3.hpp"

namespace lagrangeflow {

/// Time-dependent divergence-free velocity on [0,1] x R^3 with analytic
/// derivatives. Viscosity is fixed to 1/2 throughout the library.
class VelocityField {
public:
    virtual ~VelocityField() = default;

    virtual Vec3 eval(double t, const Vec3& x) const = 0;
    virtual Vec3 time_deriv(double t, const Vec3& x) const = 0;
    virtual Mat3 jacobian(double t, const Vec3& x) const = 0;
    virtual Vec3 laplacian(double t, const Vec3& x) const = 0;
    virtual Vec3 curl(double t, const Vec3& x) const {
        return curl_from_jacobian(jacobian(t, x));
    }
    /// Sup-norm bound on u and its first derivatives.
    virtual double bound() const = 0;
};

class PressureField {
public:
    virtual ~PressureField() = default;

    virtual double eval(double t, const Vec3& x) const = 0;
    virtual Vec3 gradient(double t, const Vec3& x) const = 0;
    virtual double bound() const = 0;
};

enum class Symmetry { translation_e3, rotation_e3 };

std::string_view to_string(Symmetry s);

struct FlowCase {
    std::string name;
    std::shared_ptr<const VelocityField> velocity;
    std::shared_ptr<const PressureField> pressure;
    bool is_exact_solution = false;
    std::set<Symmetry> symmetries;
    /// Probe-grid tolerance on |ns_residual| for exact solutions.
    double residual_tolerance = 1e-8;

    bool has_symmetry(Symmetry s) const { return symmetries.count(s) != 0; }
};

struct Residual {
    Vec3 momentum;
    double divergence = 0.0;
};

/// R = du/dt + (u.grad)u + grad p - lap(u)/2 and div u, from analytic derivatives.
Residual ns_residual(const FlowCase& fc, double t, const Vec3& x);

/// Same residual from central differences of VelocityField::eval and
/// PressureField::eval only. Time differences go one-sided at t = 0 and t = 1.
Vec3 fd_residual_oracle(const FlowCase& fc, double t, const Vec3& x, double step);

FlowCase make_taylor_green();
FlowCase make_frozen_taylor_green();
/// Taylor–Green with the (x, y) pattern moved onto (x, z); exact, but not
/// translation invariant along e3. Used as the symmetry-gate control.
FlowCase make_taylor_green_xz();
FlowCase make_lamb_oseen(double circulation = 2.0 * 3.14159265358979323846, double t0 = 1.0);
FlowCase make_zero_flow(double pressure_const = 0.5);

/// Copy of `fc` with p replaced by p + shift. The gradient is forwarded
/// untouched so derivative-only computations are bit-identical.
FlowCase with_pressure_shift(const FlowCase& fc, double shift);

std::vector<std::string> catalog_names();
/// Throws UnknownName.
FlowCase make_case(std::string_view name);

/// Uniform tensor grid over [0,1] x [-pi,pi]^3 with `points` nodes per axis.
struct ProbePoint {
    double t;
    Vec3 x;
};
std::vector<ProbePoint> probe_grid(int points = 5);

struct ProbeSummary {
    double max_residual = 0.0;  // max over grid of |R|_inf
    double max_divergence = 0.0;
    double max_fd_gap = 0.0;  // max |R_analytic - R_fd| componentwise
    double min_pressure = 0.0;
    double max_speed = 0.0;
};
ProbeSummary probe_case(const FlowCase& fc, int points = 5, double fd_step = 1e-3);

}  // namespace lagrangeflow
