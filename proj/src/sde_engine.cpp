#include "lagrangeflow/sde_engine.hpp"

#include <unistd.h>

#include <cmath>
#include <limits>
#include <new>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/rng.hpp"

namespace lagrangeflow {

TimeGrid::TimeGrid(std::size_t steps) : steps_(steps) {
    if (steps == 0) throw ContractViolation("time grid needs at least one step");
}

std::string MeasureTag::label() const { return kind == Kind::wiener ? "wiener" : "P_u(" + case_name + ")"; }

void check_capacity(std::size_t count, std::size_t elem_size) {
    if (elem_size != 0 && count > std::numeric_limits<std::size_t>::max() / elem_size) {
        throw CapacityError(std::numeric_limits<std::size_t>::max());
    }
    const std::size_t bytes = count * elem_size;
    const long pages = sysconf(_SC_PHYS_PAGES);
    const long page_size = sysconf(_SC_PAGE_SIZE);
    if (pages > 0 && page_size > 0) {
        const double physical = static_cast<double>(pages) * static_cast<double>(page_size);
        if (static_cast<double>(bytes) > 0.8 * physical) throw CapacityError(bytes);
    }
}

namespace {

template <class T>
std::vector<T> allocate(std::size_t count) {
    check_capacity(count, sizeof(T));
    try {
        return std::vector<T>(count);
    } catch (const std::bad_alloc&) {
        throw CapacityError(count * sizeof(T));
    }
}

void check_sizes(std::size_t paths, std::size_t steps) {
    if (paths < 1) throw ContractViolation("simulation needs N >= 1");
    if (steps < 2) throw ContractViolation("simulation needs M >= 2");
}

/// One Euler–Maruyama path. `u` may be null (Wiener measure).
void simulate_path(const VelocityField* u, const TimeGrid& grid, std::uint64_t seed, std::size_t n,
                   std::size_t refine, Vec3* pos, Vec3* noise) {
    const std::size_t m = grid.steps();
    const double dt = grid.dt();
    const double sqrt_dt_fine = std::sqrt(1.0 / static_cast<double>(m * refine));
    Vec3 x{};
    pos[0] = x;
    for (std::size_t k = 0; k < m; ++k) {
        Vec3 db{};
        for (std::size_t r = 0; r < refine; ++r) db += sqrt_dt_fine * gaussian_triple(seed, n, k * refine + r);
        noise[k] = db;
        if (u != nullptr) x += u->eval(1.0 - grid.t(k), x) * (-dt);
        x += db;
        pos[k + 1] = x;
    }
}

PathEnsemble run(const VelocityField* u, MeasureTag tag, std::size_t paths, std::size_t steps,
                 std::uint64_t seed, std::size_t refine) {
    check_sizes(paths, steps);
    if (refine < 1) throw ContractViolation("refine must be >= 1");
    const TimeGrid grid(steps);
    auto pos = allocate<Vec3>(paths * grid.points());
    auto noise = allocate<Vec3>(paths * grid.steps());
    const auto np = static_cast<long long>(paths);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        simulate_path(u, grid, seed, n, refine, pos.data() + n * grid.points(), noise.data() + n * grid.steps());
    }
    return PathEnsemble(grid, paths, std::move(tag), seed, std::move(pos), std::move(noise));
}

}  // namespace

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t paths, MeasureTag tag, std::uint64_t seed,
                           std::vector<Vec3> positions, std::vector<Vec3> noise)
    : grid_(grid), paths_(paths), tag_(std::move(tag)), seed_(seed), positions_(std::move(positions)),
      noise_(std::move(noise)) {
    if (positions_.size() != paths_ * grid_.points() || noise_.size() != paths_ * grid_.steps()) {
        throw ContractViolation("ensemble buffers do not match N and M");
    }
}

ProcessSample::ProcessSample(TimeGrid grid, std::size_t paths, std::size_t dim, std::string label)
    : grid_(grid), paths_(paths), dim_(dim), label_(std::move(label)),
      values_(allocate<double>(paths * grid.points() * dim)) {}

ProcessSample::ProcessSample(TimeGrid grid, std::size_t paths, std::size_t dim, std::string label,
                             std::vector<double> values)
    : grid_(grid), paths_(paths), dim_(dim), label_(std::move(label)), values_(std::move(values)) {
    if (values_.size() != paths_ * grid_.points() * dim_) {
        throw ContractViolation("process values do not match N, M and dimension");
    }
}

ProcessSample component(const ProcessSample& p, std::size_t d) {
    if (d >= p.dim()) throw ContractViolation("component index out of range");
    ProcessSample out(p.grid(), p.paths(), 1, p.label() + "[" + std::to_string(d) + "]");
    const std::size_t kp = p.grid().points();
    const auto np = static_cast<long long>(p.paths());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        for (std::size_t k = 0; k < kp; ++k) out.at(n, k) = p(n, k, d);
    }
    return out;
}

PathEnsemble simulate_pu(const FlowCase& fc, std::size_t paths, std::size_t steps, std::uint64_t seed,
                         std::size_t refine) {
    return run(fc.velocity.get(), MeasureTag::pu(fc.name), paths, steps, seed, refine);
}

PathEnsemble simulate_wiener(std::size_t paths, std::size_t steps, std::uint64_t seed, std::size_t refine) {
    return run(nullptr, MeasureTag::wiener(), paths, steps, seed, refine);
}

void require_pu(const FlowCase& fc, const PathEnsemble& ens, std::string_view op) {
    if (ens.tag() != MeasureTag::pu(fc.name)) {
        throw ContractViolation(std::string(op) + ": expected a P_u(" + fc.name + ") ensemble, got " +
                                ens.tag().label());
    }
}

void require_wiener(const PathEnsemble& ens, std::string_view op) {
    if (ens.tag().kind != MeasureTag::Kind::wiener) {
        throw ContractViolation(std::string(op) + ": expected a Wiener ensemble, got " + ens.tag().label());
    }
}

ProcessSample drift_process(const FlowCase& fc, const PathEnsemble& ens) {
    require_pu(fc, ens, "drift_process");
    const auto& grid = ens.grid();
    ProcessSample v(grid, ens.paths(), 3, "drift");
    const auto np = static_cast<long long>(ens.paths());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < np; ++i) {
        const auto n = static_cast<std::size_t>(i);
        for (std::size_t k = 0; k < grid.points(); ++k) {
            const Vec3 vk = -fc.velocity->eval(1.0 - grid.t(k), ens.position(n, k));
            for (std::size_t d = 0; d < 3; ++d) v.at(n, k, d) = vk[d];
        }
    }
    return v;
}

}  // namespace lagrangeflow
