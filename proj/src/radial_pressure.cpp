#include "lagrangeflow/radial_pressure.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace lagrangeflow {

struct VortexPressureProfile::Spline {
    boost::math::interpolators::cubic_hermite<std::vector<double>> interp;
};

double VortexPressureProfile::slope(double w) {
    if (w < 1e-4) {
        // (1 - e^{-w})/w = 1 - w/2 + w^2/6 - ...
        const double r = 1.0 - w / 2.0 + w * w / 6.0;
        return r * r;
    }
    const double r = -std::expm1(-w) / w;
    return r * r;
}

double VortexPressureProfile::limit() { return 2.0 * std::numbers::ln2; }

VortexPressureProfile::VortexPressureProfile(double w_max, double spacing) : w_max_(w_max) {
    using boost::math::quadrature::gauss_kronrod;
    const auto n = static_cast<std::size_t>(std::ceil(w_max / spacing));
    std::vector<double> w(n + 1), f(n + 1), df(n + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        w[i] = spacing * static_cast<double>(i);
        if (i > 0) {
            acc += gauss_kronrod<double, 15>::integrate(slope, w[i - 1], w[i], 2, 1e-14);
        }
        f[i] = acc;
        df[i] = slope(w[i]);
    }
    spline_ = std::make_unique<Spline>(
        Spline{boost::math::interpolators::cubic_hermite<std::vector<double>>(
            std::move(w), std::move(f), std::move(df))});
}

VortexPressureProfile::~VortexPressureProfile() = default;

double VortexPressureProfile::operator()(double w) const {
    if (w <= 0.0) return 0.0;
    if (w >= w_max_) return limit() - 1.0 / w;
    return spline_->interp(w);
}

}  // namespace lagrangeflow
