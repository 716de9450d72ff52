#include "lagrangeflow/noether.hpp"

#include <cmath>
#include <vector>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/parallel.hpp"
#include "lagrangeflow/reduce.hpp"

namespace lagrangeflow {

GeneratorField GeneratorField::translation_e3() {
    return {"translation_e3", [](double, const Vec3&) { return e3; }, [](double, const Vec3&) { return Mat3{}; }};
}

GeneratorField GeneratorField::rotation_e3() {
    return {"rotation_e3", [](double, const Vec3& x) { return Vec3{-x[1], x[0], 0.0}; },
            [](double, const Vec3&) {
                Mat3 g;
                g(0, 1) = -1.0;
                g(1, 0) = 1.0;
                return g;
            }};
}

GeneratorField GeneratorField::zero() {
    return {"zero", [](double, const Vec3&) { return Vec3{}; }, [](double, const Vec3&) { return Mat3{}; }};
}

GeneratorField make_generator(std::string_view name) {
    if (name == "translation_e3") return GeneratorField::translation_e3();
    if (name == "rotation_e3") return GeneratorField::rotation_e3();
    if (name == "zero") return GeneratorField::zero();
    throw UnknownName("unknown generator '" + std::string(name) + "'");
}

Mat3 kappa(const GeneratorField& gen, double t, const Vec3& x) {
    const Mat3 g = gen.grad_xi(t, x);
    const Mat3 alpha = identity3();
    return alpha * g.transposed() + g * alpha;
}

ProcessSample el_process(const FlowCase& fc, const PathEnsemble& pu) {
    require_pu(fc, pu, "el_process");
    const auto& grid = pu.grid();
    const double dt = grid.dt();
    ProcessSample out(grid, pu.paths(), 3, "euler_lagrange");
    const auto np = static_cast<long long>(pu.paths());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        Vec3 acc{};
        for (std::size_t k = 0; k < grid.points(); ++k) {
            const double t = 1.0 - grid.t(k);
            const Vec3 v = -fc.velocity->eval(t, pu.position(n, k));
            const Vec3 val = v + acc;
            for (std::size_t d = 0; d < 3; ++d) out.at(n, k, d) = val[d];
            acc += fc.pressure->gradient(t, pu.position(n, k)) * dt;
        }
    }
    return out;
}

ProcessSample noether_process_general(const FlowCase& fc, const PathEnsemble& pu, const GeneratorField& gen,
                                      bool include_bracket) {
    require_pu(fc, pu, "noether_process_general");
    const auto& grid = pu.grid();
    ProcessSample out(grid, pu.paths(), 1, include_bracket ? "noether:" + gen.name : "pairing:" + gen.name);
    const auto np = static_cast<long long>(pu.paths());
    ExceptionRelay relay;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) relay.run([&] {
        const auto n = static_cast<std::size_t>(i);
        double bracket = 0.0;
        Vec3 xi_prev, v_prev;
        for (std::size_t k = 0; k < grid.points(); ++k) {
            const Vec3& x = pu.position(n, k);
            const Vec3 xi = gen.xi(grid.t(k), x);
            const Vec3 v = -fc.velocity->eval(1.0 - grid.t(k), x);
            if (k > 0 && include_bracket) bracket += dot(xi - xi_prev, v - v_prev);
            out.at(n, k) = dot(xi, v) - bracket;
            xi_prev = xi;
            v_prev = v;
        }
    });
    relay.rethrow();
    return out;
}

ProcessSample noether_rotation_closed_form(const FlowCase& fc, const PathEnsemble& pu, bool include_compensator) {
    require_pu(fc, pu, "noether_rotation_closed_form");
    const auto& grid = pu.grid();
    const double dt = grid.dt();
    ProcessSample out(grid, pu.paths(), 1, include_compensator ? "noether:rotation_closed_form" : "kinetic_momentum");
    const auto np = static_cast<long long>(pu.paths());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        double comp = 0.0;
        for (std::size_t k = 0; k < grid.points(); ++k) {
            const Vec3& x = pu.position(n, k);
            const double t = 1.0 - grid.t(k);
            const Vec3 v = -fc.velocity->eval(t, x);
            out.at(n, k) = x[0] * v[1] - x[1] * v[0] + comp;
            if (include_compensator) comp += fc.velocity->curl(t, x)[2] * dt;
        }
    }
    return out;
}

ProcessGap mean_sup_gap(const ProcessSample& a, const ProcessSample& b) {
    if (!(a.grid() == b.grid()) || a.paths() != b.paths() || a.dim() != 1 || b.dim() != 1) {
        throw ContractViolation("mean_sup_gap: processes must be scalar and share a grid");
    }
    ProcessGap gap;
    std::vector<double> diff(a.paths());
    for (std::size_t k = 0; k < a.grid().points(); ++k) {
        for (std::size_t n = 0; n < a.paths(); ++n) diff[n] = a(n, k) - b(n, k);
        const auto e = estimate_mean(diff);
        if (std::fabs(e.value) > gap.sup) {
            gap.sup = std::fabs(e.value);
            gap.std_error = e.std_error;
            gap.argmax_k = k;
        }
    }
    return gap;
}

namespace {

Vec3 flow_of(Symmetry gen, const Vec3& x, double eps) {
    if (gen == Symmetry::translation_e3) return {x[0], x[1], x[2] + eps};
    const double c = std::cos(eps), s = std::sin(eps);
    return {c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]};
}

}  // namespace

SymmetryCheckReport symmetry_check(const FlowCase& fc, Symmetry gen) {
    SymmetryCheckReport rep;
    rep.generator = std::string(to_string(gen));
    rep.grid = "5^4 probe grid over [0,1]x[-pi,pi]^3, eps in {-0.5,-0.1,0.1,0.5}";
    for (const auto& pt : probe_grid(5)) {
        const double p0 = fc.pressure->eval(pt.t, pt.x);
        const double s0 = norm(fc.velocity->eval(pt.t, pt.x));
        for (double eps : {-0.5, -0.1, 0.1, 0.5}) {
            const Vec3 y = flow_of(gen, pt.x, eps);
            rep.max_pressure_violation = std::max(rep.max_pressure_violation, std::fabs(fc.pressure->eval(pt.t, y) - p0));
            rep.max_speed_violation = std::max(rep.max_speed_violation, std::fabs(norm(fc.velocity->eval(pt.t, y)) - s0));
        }
    }
    return rep;
}

SymmetryCheckReport symmetry_check(const FlowCase& fc, std::string_view generator_name) {
    if (generator_name == "translation_e3") return symmetry_check(fc, Symmetry::translation_e3);
    if (generator_name == "rotation_e3") return symmetry_check(fc, Symmetry::rotation_e3);
    throw UnknownName("symmetry_check supports translation_e3 and rotation_e3, not '" + std::string(generator_name) + "'");
}

}  // namespace lagrangeflow
