#pragma once

#include <array>
#include <cstdint>

#include "lagrangeflow/vec3.hpp"

namespace lagrangeflow {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
/// (counter, key) always yields the same 128 bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

/// Uniform on (0, 1] from the top 53 bits.
inline double uniform_open_closed(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Three independent standard normals addressed by (seed, path, step).
Vec3 gaussian_triple(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

}  // namespace lagrangeflow
