#pragma once

// Gamma and Beta functions together with sphere and ball measures.
//
// Sphere convention: sphere_measure(m) is the (m-1)-dimensional surface
// measure of the unit sphere in R^m, so that for radial f
//   integral_{R^m} f(|y|) dy = sphere_measure(m) * integral_0^inf f(t) t^{m-1} dt.

namespace hsx {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), evaluated in log space.
double beta(double a, double b);

/// 2 pi^{m/2} / Gamma(m/2), m >= 1.
double sphere_measure(int m);

/// pi^{m/2} / Gamma(m/2 + 1), m >= 1.
double ball_volume(int m);

struct GeometricConstants {
    double sigma_m;  ///< sphere_measure(m)
    double omega_m;  ///< ball_volume(m)
};

GeometricConstants geometric_constants(int m);

} // namespace hsx
