#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace lagrangeflow {

struct Vec3 {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec3& operator+=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr Vec3 e1{1.0, 0.0, 0.0};
inline constexpr Vec3 e2{0.0, 1.0, 0.0};
inline constexpr Vec3 e3{0.0, 0.0, 1.0};

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vec3& a) {
    return std::fmax(std::fabs(a[0]), std::fmax(std::fabs(a[1]), std::fabs(a[2])));
}

/// Row-major 3x3 matrix. For a Jacobian, m(i, j) = d u^i / d x^j.
struct Mat3 {
    std::array<double, 9> a{};

    constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
    constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

    constexpr double trace() const { return a[0] + a[4] + a[8]; }

    constexpr Mat3 transposed() const {
        Mat3 t;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }

    friend constexpr Mat3 operator+(Mat3 x, const Mat3& y) {
        for (std::size_t i = 0; i < 9; ++i) x.a[i] += y.a[i];
        return x;
    }
    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
            m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
            m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

constexpr Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) r(i, j) += x(i, k) * y(k, j);
    return r;
}

constexpr Mat3 identity3() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

/// (d2u3 - d3u2, d3u1 - d1u3, d1u2 - d2u1) from a Jacobian.
constexpr Vec3 curl_from_jacobian(const Mat3& j) {
    return {j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)};
}

}  // namespace lagrangeflow
