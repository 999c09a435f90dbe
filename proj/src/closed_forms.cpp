#include "hsx/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hsx/errors.hpp"
#include "hsx/quadrature.hpp"
#include "hsx/special_fn.hpp"

namespace hsx {

namespace {

const char* const kModule = "closed_forms";

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(kModule, what);
}

bool close(double x, double y, double rel) {
    return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
}

void require_extremal(int n, int k) {
    if (n < 3 || k < 2 || k > n) {
        std::ostringstream os;
        os << "extremal family requires n >= 3 and 2 <= k <= n, got n=" << n << " k=" << k;
        throw DomainError(kModule, os.str());
    }
}

} // namespace

double beta_integral_full(int n, int k, double m, double s) {
    require(0.0 <= s && s < k && k < n, "beta_integral_full requires 0 <= s < k < n");
    const double b1 = m - 0.5 * (n - k);
    const double b2 = m - 0.5 * (n - s);
    if (!(b1 > 0.0)) {
        std::ostringstream os;
        os << "divergent: Beta argument m - (n-k)/2 = " << b1 << " is not positive";
        throw DivergentIntegralError(kModule, os.str());
    }
    if (!(b2 > 0.0)) {
        std::ostringstream os;
        os << "divergent: Beta argument m - (n-s)/2 = " << b2 << " is not positive";
        throw DivergentIntegralError(kModule, os.str());
    }
    return 0.25 * sphere_measure(n - k) * sphere_measure(k) * beta(0.5 * (n - k), b1) *
           beta(0.5 * (k - s), b2);
}

double beta_integral_radial(int k, double a, double s) {
    require(k >= 1 && 0.0 <= s && s < k, "beta_integral_radial requires 0 <= s < k");
    const double b = a - 0.5 * (k - s);
    if (!(b > 0.0)) {
        std::ostringstream os;
        os << "divergent: Beta argument a - (k-s)/2 = " << b << " is not positive";
        throw DivergentIntegralError(kModule, os.str());
    }
    return 0.5 * sphere_measure(k) * beta(0.5 * (k - s), b);
}

double normalization_integral_closed(int n, int k, double p) {
    require_extremal(n, k);
    require(p > 0.0, "shift must be positive");
    double value = sphere_measure(k) * std::pow(p, -(n - 1)) * beta(k - 1, n - 1);
    if (k < n) value *= 0.5 * sphere_measure(n - k) * beta(0.5 * (n - k), 0.5 * (n + k) - 1.0);
    return value;
}

double SharpConstant::discrepancy(double other) const { return std::abs(other - K) / K; }

SharpConstant sharp_constant_K(int n, int k, double tol) {
    require_extremal(n, k);
    SharpConstant c;
    c.n = n;
    c.k = k;
    const int a = k - 1;
    const double p = (n - 2.0) / (4.0 * a);
    c.p_shift = p;

    Integrand2D f = [n, p](double rho, double r) {
        const double d = (rho + p) * (rho + p) + r * r;
        return std::pow(d, -(n - 1));
    };
    const QuadratureResult q = integrate_cylindrical(f, n, k, 1.0, {}, tol);
    c.J = q.value;
    c.J_error = q.error_estimate;
    c.J_closed = normalization_integral_closed(n, k, p);
    if (!close(c.J, c.J_closed, std::max(1e-8, 100 * tol))) {
        std::ostringstream os;
        os.precision(17);
        os << "normalization integral: quadrature " << c.J << " vs closed form " << c.J_closed;
        throw InternalConsistencyError(kModule, os.str());
    }

    const double half = 0.5 * (n - 2);
    c.Lambda = half * half * std::pow(c.J, 1.0 / (n - 1));
    c.K = 1.0 / std::sqrt(c.Lambda);
    c.mu = 4.0 * c.Lambda / ((n - 2.0) * (n - 2.0));
    c.K_literal = std::pow(c.Lambda, (n - 2.0) / (2.0 * (n - 1)));

    const double lit_exponent = 2.0 * (n - 1) * (n - 1) / (n - 2.0);
    const double lit_rhs = std::pow(half, 2 * (n - 1)) * c.J;
    if (!close(std::pow(c.K_literal, lit_exponent), lit_rhs, 1e-10) ||
        !close(std::pow(c.K_literal, 2.0 * (n - 1) / (n - 2.0)), c.Lambda, 1e-12) ||
        !close(c.K * c.K * c.Lambda, 1.0, 1e-14))
        throw InternalConsistencyError(kModule, "sharp constant relations do not hold");

    if (k < n) {
        const double y_factor = 0.5 * sphere_measure(n - k) * beta(0.5 * (n - k), 0.5 * (n + k) - 1.0);
        const double line1 = std::pow(half, 2 * (n - 1)) * y_factor * sphere_measure(k) *
                             std::pow(p, -(n + k + 1)) * beta(k - 1, n + k - 1);
        const double line2 = std::pow(2.0, 2 * k + 3) * std::pow(n - 2.0, n - k - 3) *
                             std::pow(k - 1.0, n + k + 1) * sphere_measure(n - k) *
                             sphere_measure(k) * beta(0.5 * (n - k), 0.5 * (n + k) - 1.0) *
                             beta(k - 1, n - 1);
        c.K_printed = std::pow(line1, 1.0 / lit_exponent);
        c.K_printed_simplified = std::pow(line2, 1.0 / lit_exponent);
    }
    return c;
}

double extremal_prefactor(const ExtremalParams& params, double Lambda) {
    require_extremal(params.n, params.k);
    require(params.lambda > 0.0, "dilation lambda must be positive");
    require(Lambda > 0.0, "Lambda must be positive");
    const int n = params.n;
    return std::pow(params.lambda, -(n - 2)) * std::pow(0.5 * (n - 2), n - 2) *
           std::pow(Lambda, -0.5 * (n - 2));
}

double extremal_lambda(const SharpConstant& constant, ExtremalConvention conv) {
    if (conv == ExtremalConvention::normalized) return constant.Lambda;
    return std::pow(constant.K, 2.0 * (constant.n - 1) / (constant.n - 2.0));
}

ExtremalProfile::ExtremalProfile(const ExtremalParams& params, double Lambda)
    : n_(params.n), Lambda_(Lambda), prefactor_(extremal_prefactor(params, Lambda)) {
    shift_ = (n_ - 2.0) / (4.0 * params.a() * params.lambda * params.lambda);
    // The two ways of writing the amplitude must agree.
    const double lhs = std::pow(4.0 / ((n_ - 2.0) * (n_ - 2.0)), -0.5 * (n_ - 2));
    const double rhs = std::pow(0.5 * (n_ - 2), n_ - 2);
    if (!close(lhs, rhs, 1e-14))
        throw InternalConsistencyError(kModule, "extremal prefactor forms disagree");
}

double ExtremalProfile::operator()(double rho, double r) const {
    const double d = (rho + shift_) * (rho + shift_) + r * r;
    return prefactor_ * std::pow(d, -0.5 * (n_ - 2));
}

double extremal_v(const ExtremalParams& params, const SharpConstant& constant, double x_norm,
                  std::span<const double> y, ExtremalConvention conv) {
    require(constant.n == params.n && constant.k == params.k, "constant does not match (n, k)");
    require(x_norm >= 0.0, "|x| must be non-negative");
    const std::size_t dim_y = static_cast<std::size_t>(params.n - params.k);
    require(y.size() == dim_y, "y has the wrong dimension");
    require(params.y0.empty() || params.y0.size() == dim_y, "y0 has the wrong dimension");
    double r2 = 0.0;
    for (std::size_t i = 0; i < dim_y; ++i) {
        const double d = y[i] - (params.y0.empty() ? 0.0 : params.y0[i]);
        r2 += d * d;
    }
    const ExtremalProfile v(params, extremal_lambda(constant, conv));
    if (conv == ExtremalConvention::printed) {
        const double expect = std::pow(params.lambda, -(params.n - 2)) *
                              std::pow(0.5 * (params.n - 2), params.n - 2) *
                              std::pow(constant.K, -(params.n - 1));
        if (!close(expect, v.prefactor(), 1e-12))
            throw InternalConsistencyError(kModule, "printed prefactor mismatch");
    }
    return v(x_norm, std::sqrt(r2));
}

double prop41_phi(const Prop4Params& params, double rho, double r) {
    const double l2 = params.lambda * params.lambda;
    return l2 * ((rho + params.alpha) * (rho + params.alpha) + (r + params.beta) * (r + params.beta));
}

double prop4_value(const Prop4Params& params, double rho, double r) {
    require(params.a >= 1 && params.b >= 1, "a and b must be positive integers");
    require(params.lambda > 0.0, "lambda must be positive");
    if (rho + params.alpha == 0.0 && r + params.beta == 0.0)
        throw SingularityError(kModule, "pole: |x| = -alpha and |y| = -beta");
    const double phi = prop41_phi(params, rho, r);
    return std::pow(phi, -0.5 * (params.n() - 2));
}

Prop4Value prop4_solution(const Prop4Params& params, std::span<const double> x,
                          std::span<const double> y) {
    require(x.size() == static_cast<std::size_t>(params.a + 1) &&
                y.size() == static_cast<std::size_t>(params.b + 1),
            "x must have a+1 and y b+1 coordinates");
    double x2 = 0.0, y2 = 0.0;
    for (double v : x) x2 += v * v;
    for (double v : y) y2 += v * v;
    return {prop4_value(params, std::sqrt(x2), std::sqrt(y2)), params.p_coef(), params.q_coef()};
}

double fundamental_solution(int n, double z_norm) {
    require(n > 2, "fundamental solution requires n > 2");
    if (z_norm == 0.0) throw SingularityError(kModule, "fundamental solution at the origin");
    require(z_norm > 0.0, "|z| must be positive");
    return std::pow(z_norm, 2 - n) / (n * (n - 2) * ball_volume(n));
}

PointFunction kelvin_transform(PointFunction u, int n) {
    require(n > 2, "Kelvin transform requires n > 2");
    return [u = std::move(u), n](std::span<const double> z) {
        if (z.size() != static_cast<std::size_t>(n))
            throw DomainError(kModule, "point dimension does not match n");
        double z2 = 0.0;
        for (double v : z) z2 += v * v;
        if (z2 == 0.0) throw SingularityError(kModule, "Kelvin transform at the origin");
        std::vector<double> w(z.begin(), z.end());
        for (double& v : w) v /= z2;
        return std::pow(z2, 0.5 * (2 - n)) * u(w);
    };
}

} // namespace hsx
