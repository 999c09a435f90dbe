#pragma once

// Adaptive Gauss-Kronrod integration of singular weighted integrals under the
// radial and cylindrical reductions of R^n = R^k x R^{n-k}.
//
// Semi-infinite ranges use t = x/(1+x). The half t > 1/2 is parameterized by
// u = 1 - t so that nodes can cluster at the far tail without losing
// floating-point resolution. Endpoint power singularities x^{e}, e > -1, are
// left in the integrand; Gauss nodes never touch the endpoints.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "hsx/errors.hpp"

namespace hsx {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::int64_t kDefaultEvalBudget = 10'000'000;

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0;  ///< absolute, >= 0
    std::int64_t evaluations = 0;
};

/// Budget exhausted, divergent integrand, or subdivision below resolution.
/// Carries the best partial result reached.
class QuadratureConvergenceError : public ConvergenceError {
public:
    QuadratureConvergenceError(const std::string& what, QuadratureResult partial)
        : ConvergenceError("quadrature", what), partial_(partial) {}
    const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

using Integrand1D = std::function<double(double)>;
using Integrand2D = std::function<double(double rho, double r)>;

/// integral_a^b f(x) dx with relative tolerance tol; b may be +inf.
QuadratureResult integrate_interval(const Integrand1D& f, double a, double b,
                                    double tol = kDefaultQuadTol,
                                    std::int64_t budget = kDefaultEvalBudget);

/// sphere_measure(k) * integral_0^inf g(rho) rho^{k-1-s} d rho.
QuadratureResult integrate_radial(const Integrand1D& g, int k, double s,
                                  double tol = kDefaultQuadTol,
                                  std::int64_t budget = kDefaultEvalBudget);

/// Rectangle [0, rho_max] x [0, r_max] of the (rho, r) quadrant. An absent
/// r_max means +inf when k < n and "no r dimension" when k = n.
struct CylindricalDomain {
    double rho_max = std::numeric_limits<double>::infinity();
    std::optional<double> r_max;
};

/// sphere_measure(k) sphere_measure(n-k) integral integral f(rho, r) rho^{k-1-s} r^{n-k-1}.
/// For k = n the r integral is absent and f is called with r = 0.
QuadratureResult integrate_cylindrical(const Integrand2D& f, int n, int k, double s,
                                       const CylindricalDomain& domain = {},
                                       double tol = kDefaultQuadTol,
                                       std::int64_t budget = kDefaultEvalBudget);

/// I(z) = integral over |z - zeta| <= |z|/2 of |z - zeta|^{2-n} |xi|^{-s} d zeta,
/// zeta = (xi, eta) in R^k x R^{n-k}. z has n coordinates, the first k are x.
QuadratureResult singular_newtonian_integral(std::span<const double> z, int n, int k, double s,
                                             double tol = 1e-8,
                                             std::int64_t budget = kDefaultEvalBudget);

} // namespace hsx
