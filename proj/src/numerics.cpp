#include "attcc/numerics.hpp"

#include <cmath>

namespace attcc {

namespace {

double initial_guess(double x) {
    if (x < -0.25) {
        // Series around the branch point -1/e.
        const double s = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        return -1.0 + s - s * s / 3.0 + 11.0 / 72.0 * s * s * s;
    }
    if (x < 1.0) {
        return x * (1.0 - x + 1.5 * x * x);
    }
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
    constexpr double branch = -0.36787944117144233;  // -1/e
    constexpr double slack = 1e-15;
    if (!(x >= branch - slack)) {
        throw std::domain_error("lambert_w0: argument below -1/e");
    }
    if (x <= branch) return -1.0;
    if (x == 0.0) return 0.0;

    double w = initial_guess(x);
    for (int i = 0; i < 100; ++i) {
        const double ew = std::exp(w);
        const double r = w * ew - x;
        if (std::fabs(r) <= 1e-14 * std::max(1.0, std::fabs(x))) break;
        // Halley step.
        const double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        const double step = r / denom;
        w -= step;
        if (w < -1.0) w = -1.0 + 1e-16;  // stay on the principal branch
        if (std::fabs(step) <= 1e-16 * std::max(1.0, std::fabs(w))) break;
    }
    return w;
}

}  // namespace attcc
