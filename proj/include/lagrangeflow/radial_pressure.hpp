#pragma once

#include <memory>

namespace lagrangeflow {

/// F(w) = int_0^w (1 - e^{-s})^2 / s^2 ds, the dimensionless pressure profile
/// of a diffusing point vortex. Tabulated once by adaptive quadrature and
/// interpolated with a cubic Hermite spline using the exact nodal slopes.
/// Beyond the table the tail uses F(inf) - 1/w, exact up to O(e^{-w}/w).
class VortexPressureProfile {
public:
    explicit VortexPressureProfile(double w_max = 60.0, double spacing = 1.0 / 512.0);
    ~VortexPressureProfile();
    VortexPressureProfile(const VortexPressureProfile&) = delete;
    VortexPressureProfile& operator=(const VortexPressureProfile&) = delete;

    double operator()(double w) const;
    /// Integrand (1 - e^{-w})^2 / w^2, evaluated stably near 0.
    static double slope(double w);

    static double limit();  // F(inf) = 2 ln 2
    double table_end() const { return w_max_; }

private:
    struct Spline;
    double w_max_;
    std::unique_ptr<Spline> spline_;
};

}  // namespace lagrangeflow
