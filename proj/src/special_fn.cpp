#include "hsx/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsx/errors.hpp"

namespace hsx {

namespace {
const char* const kModule = "special_fn";
}

// glibc's lgamma is accurate to a few ulp on the positive axis, which is well
// inside the 1e-13 relative budget this module promises on [0.5, 100].
double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "log_gamma requires x > 0, got " << x;
        throw DomainError(kModule, os.str());
    }
    return std::lgamma(x);
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        std::ostringstream os;
        os << "beta requires positive arguments, got (" << a << ", " << b << ")";
        throw DomainError(kModule, os.str());
    }
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double sphere_measure(int m) {
    if (m < 1) throw DomainError(kModule, "sphere_measure requires m >= 1");
    const double half = 0.5 * m;
    return 2.0 * std::exp(half * std::log(std::numbers::pi) - log_gamma(half));
}

double ball_volume(int m) {
    if (m < 1) throw DomainError(kModule, "ball_volume requires m >= 1");
    const double half = 0.5 * m;
    return std::exp(half * std::log(std::numbers::pi) - log_gamma(half + 1.0));
}

GeometricConstants geometric_constants(int m) { return {sphere_measure(m), ball_volume(m)}; }

} // namespace hsx
