#include <cmath>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/rng.hpp"
#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow::reference {

namespace {

PathEnsemble run(const VelocityField* u, MeasureTag tag, std::size_t paths, std::size_t steps,
                 std::uint64_t seed, std::size_t refine) {
    if (paths < 1 || steps < 2 || refine < 1) throw ContractViolation("reference simulate: bad sizes");
    const TimeGrid grid(steps);
    std::vector<Vec3> pos(paths * (steps + 1));
    std::vector<Vec3> noise(paths * steps);
    const double dt = 1.0 / static_cast<double>(steps);
    const double sqrt_dt_fine = std::sqrt(1.0 / static_cast<double>(steps * refine));
    for (std::size_t n = 0; n < paths; ++n) {
        Vec3 x;
        pos[n * (steps + 1)] = x;
        for (std::size_t k = 0; k < steps; ++k) {
            Vec3 db;
            for (std::size_t r = 0; r < refine; ++r) {
                const Vec3 z = gaussian_triple(seed, n, k * refine + r);
                for (std::size_t d = 0; d < 3; ++d) db[d] += sqrt_dt_fine * z[d];
            }
            noise[n * steps + k] = db;
            if (u != nullptr) {
                const Vec3 drift = u->eval(1.0 - static_cast<double>(k) / static_cast<double>(steps), x);
                for (std::size_t d = 0; d < 3; ++d) x[d] += drift[d] * (-dt);
            }
            for (std::size_t d = 0; d < 3; ++d) x[d] += db[d];
            pos[n * (steps + 1) + k + 1] = x;
        }
    }
    return PathEnsemble(grid, paths, std::move(tag), seed, std::move(pos), std::move(noise));
}

}  // namespace

PathEnsemble simulate_pu(const FlowCase& fc, std::size_t paths, std::size_t steps, std::uint64_t seed,
                         std::size_t refine) {
    return run(fc.velocity.get(), MeasureTag::pu(fc.name), paths, steps, seed, refine);
}

PathEnsemble simulate_wiener(std::size_t paths, std::size_t steps, std::uint64_t seed, std::size_t refine) {
    return run(nullptr, MeasureTag::wiener(), paths, steps, seed, refine);
}

}  // namespace lagrangeflow::reference
