#include "lagrangeflow/rng.hpp"

#include <cmath>
#include <numbers>

namespace lagrangeflow {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMulA, ctr[0], hi0, lo0);
        mulhilo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

Vec3 gaussian_triple(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const auto step_lo = static_cast<std::uint32_t>(step);
    // Word 1 carries the draw index in its low bit and the step's high bits above it.
    const auto step_hi = static_cast<std::uint32_t>(step >> 32) << 1;
    const auto path_lo = static_cast<std::uint32_t>(path);
    const auto path_hi = static_cast<std::uint32_t>(path >> 32);
    const auto a = philox4x32({step_lo, step_hi, path_lo, path_hi}, key);
    const auto b = philox4x32({step_lo, step_hi | 1u, path_lo, path_hi}, key);

    const double u1 = uniform_open_closed(join(a[0], a[1]));
    const double u2 = uniform_open_closed(join(a[2], a[3]));
    const double u3 = uniform_open_closed(join(b[0], b[1]));
    const double u4 = uniform_open_closed(join(b[2], b[3]));

    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double r1 = std::sqrt(-2.0 * std::log(u1));
    const double r2 = std::sqrt(-2.0 * std::log(u3));
    return {r1 * std::cos(two_pi * u2), r1 * std::sin(two_pi * u2), r2 * std::cos(two_pi * u4)};
}

}  // namespace lagrangeflow
