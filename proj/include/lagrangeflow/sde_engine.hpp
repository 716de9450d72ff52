#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lagrangeflow/flow_catalog.hpp"
#include "lagrangeflow/vec3.hpp"

namespace lagrangeflow {

/// Uniform grid t_k = k / M on [0, 1].
class TimeGrid {
public:
    explicit TimeGrid(std::size_t steps);

    std::size_t steps() const { return steps_; }
    std::size_t points() const { return steps_ + 1; }
    double dt() const { return 1.0 / static_cast<double>(steps_); }
    double t(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(steps_); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    std::size_t steps_;
};

struct MeasureTag {
    enum class Kind { wiener, pu };
    Kind kind = Kind::wiener;
    std::string case_name;  // empty for Wiener

    static MeasureTag wiener() { return {Kind::wiener, {}}; }
    static MeasureTag pu(std::string name) { return {Kind::pu, std::move(name)}; }
    std::string label() const;

    friend bool operator==(const MeasureTag&, const MeasureTag&) = default;
};

/// N discretized paths on a TimeGrid, X[n,0] = 0, together with the Gaussian
/// increments that generated them. Immutable once built.
class PathEnsemble {
public:
    /// Validates buffer sizes. positions: N*(M+1), noise: N*M, both path-major.
    PathEnsemble(TimeGrid grid, std::size_t paths, MeasureTag tag, std::uint64_t seed,
                 std::vector<Vec3> positions, std::vector<Vec3> noise);

    const TimeGrid& grid() const { return grid_; }
    std::size_t paths() const { return paths_; }
    const MeasureTag& tag() const { return tag_; }
    std::uint64_t seed() const { return seed_; }

    const Vec3& position(std::size_t n, std::size_t k) const { return positions_[n * grid_.points() + k]; }
    const Vec3& noise(std::size_t n, std::size_t k) const { return noise_[n * grid_.steps() + k]; }
    std::span<const Vec3> path(std::size_t n) const {
        return {positions_.data() + n * grid_.points(), grid_.points()};
    }
    std::span<const Vec3> path_noise(std::size_t n) const {
        return {noise_.data() + n * grid_.steps(), grid_.steps()};
    }
    std::span<const Vec3> positions() const { return positions_; }
    std::span<const Vec3> noise() const { return noise_; }

private:
    TimeGrid grid_;
    std::size_t paths_;
    MeasureTag tag_;
    std::uint64_t seed_;
    std::vector<Vec3> positions_;
    std::vector<Vec3> noise_;
};

/// Scalar or vector process on an ensemble grid, values P[n,k,d] path-major.
/// Builders only read X[n,0..k] and noise[n,0..k-1] when producing P[n,k].
class ProcessSample {
public:
    ProcessSample(TimeGrid grid, std::size_t paths, std::size_t dim, std::string label);
    ProcessSample(TimeGrid grid, std::size_t paths, std::size_t dim, std::string label,
                  std::vector<double> values);

    const TimeGrid& grid() const { return grid_; }
    std::size_t paths() const { return paths_; }
    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }

    double operator()(std::size_t n, std::size_t k, std::size_t d = 0) const {
        return values_[(n * grid_.points() + k) * dim_ + d];
    }
    double& at(std::size_t n, std::size_t k, std::size_t d = 0) {
        return values_[(n * grid_.points() + k) * dim_ + d];
    }
    std::span<const double> values() const { return values_; }

private:
    TimeGrid grid_;
    std::size_t paths_;
    std::size_t dim_;
    std::string label_;
    std::vector<double> values_;
};

/// Component d of a vector process as a scalar process.
ProcessSample component(const ProcessSample& p, std::size_t d);

/// Throws CapacityError when `count` elements of `elem_size` bytes exceed
/// what the machine can hold.
void check_capacity(std::size_t count, std::size_t elem_size);

/// Euler–Maruyama for dX = -u(1 - t, X) dt + dB, X_0 = 0.
///
/// noise[n,k] is built from `refine` consecutive increments of the base
/// Brownian stream on the grid with M * refine steps; the base stream is keyed
/// by (seed, n, fine step index) only. Ensembles with equal M * refine and seed
/// therefore share one Brownian path per n, which gives common random numbers
/// across resolutions.
PathEnsemble simulate_pu(const FlowCase& fc, std::size_t paths, std::size_t steps, std::uint64_t seed,
                         std::size_t refine = 1);
PathEnsemble simulate_wiener(std::size_t paths, std::size_t steps, std::uint64_t seed, std::size_t refine = 1);

namespace reference {
/// Single-threaded, loop-for-loop reference for the OpenMP simulators.
PathEnsemble simulate_pu(const FlowCase& fc, std::size_t paths, std::size_t steps, std::uint64_t seed,
                         std::size_t refine = 1);
PathEnsemble simulate_wiener(std::size_t paths, std::size_t steps, std::uint64_t seed, std::size_t refine = 1);
}  // namespace reference

/// Throws ContractViolation unless the ensemble was simulated under P_u for `fc`.
void require_pu(const FlowCase& fc, const PathEnsemble& ens, std::string_view op);
void require_wiener(const PathEnsemble& ens, std::string_view op);

/// v[n,k] = -u(1 - t_k, X[n,k]); also dL/dv for the pressure Lagrangian.
ProcessSample drift_process(const FlowCase& fc, const PathEnsemble& ens);

}  // namespace lagrangeflow
