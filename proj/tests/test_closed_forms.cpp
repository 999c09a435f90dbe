#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hsx/closed_forms.hpp"
#include "hsx/errors.hpp"
#include "hsx/quadrature.hpp"
#include "hsx/special_fn.hpp"

using namespace hsx;
using std::numbers::pi;

TEST_CASE("beta_integral_full examples") {
    CHECK(beta_integral_full(3, 2, 2, 1) == doctest::Approx(pi * pi).epsilon(1e-14));
    CHECK(beta_integral_full(3, 2, 2, 0) == doctest::Approx(pi * pi).epsilon(1e-14));
    CHECK_THROWS_AS(beta_integral_full(4, 2, 1, 0), DivergentIntegralError);
}

TEST_CASE("divergent Beta integrals name the failing argument") {
    try {
        beta_integral_full(4, 2, 1, 0);
        FAIL("no error");
    } catch (const DivergentIntegralError& e) {
        CHECK(std::string(e.what()).find("m - (n-k)/2") != std::string::npos);
    }
    try {
        beta_integral_full(5, 2, 2.2, 0.0);
        FAIL("no error");
    } catch (const DivergentIntegralError& e) {
        CHECK(std::string(e.what()).find("m - (n-s)/2") != std::string::npos);
    }
    CHECK_THROWS_AS(beta_integral_full(3, 2, 2, 2), DomainError);
    CHECK_THROWS_AS(beta_integral_full(3, 3, 2, 0), DomainError);
}

TEST_CASE("beta_integral_radial examples") {
    CHECK(beta_integral_radial(2, 2, 1) == doctest::Approx(pi * pi / 2));
    CHECK(beta_integral_radial(2, 2, 0) == doctest::Approx(pi));
    CHECK_THROWS_AS(beta_integral_radial(2, 0.5, 0), DivergentIntegralError);
}

TEST_CASE("full Beta integral factorizes into radial pieces when s = 0") {
    // (1 + |x|^2 + |y|^2)^{-m} over R^k x R^{n-k} equals the radial integral in R^n.
    for (int n = 3; n <= 6; ++n)
        for (int k = 2; k < n; ++k)
            for (double m : {0.5 * n + 0.5, 0.5 * n + 1.25})
                CHECK(beta_integral_full(n, k, m, 0) ==
                      doctest::Approx(beta_integral_radial(n, m, 0)).epsilon(1e-13));
}

TEST_CASE("sharp constant for (3,2)") {
    const SharpConstant c = sharp_constant_K(3, 2);
    CHECK(c.p_shift == doctest::Approx(0.25));
    CHECK(c.J == doctest::Approx(8 * pi * pi).epsilon(1e-11));
    CHECK(c.J_closed == doctest::Approx(8 * pi * pi).epsilon(1e-14));
    CHECK(c.Lambda == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-11));
    CHECK(c.K == doctest::Approx(0.670938266965414).epsilon(1e-11));
    CHECK(c.mu == doctest::Approx(4 * c.Lambda));
    CHECK(c.K * c.K * c.Lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::pow(c.K_literal, 4.0) == doctest::Approx(c.Lambda).epsilon(1e-12));
    CHECK(c.K_literal == doctest::Approx(std::pow(c.K, -0.5)).epsilon(1e-12));
    REQUIRE(c.K_printed.has_value());
    REQUIRE(c.K_printed_simplified.has_value());
    CHECK(c.discrepancy(*c.K_printed) > 0.5);
    CHECK(c.discrepancy(*c.K_printed_simplified) > 0.5);
}

TEST_CASE("sharp constant regression values") {
    CHECK(sharp_constant_K(4, 3).K == doctest::Approx(0.482801241213924).epsilon(1e-10));
    CHECK(sharp_constant_K(4, 4).K == doctest::Approx(0.437746780259639).epsilon(1e-10));
    const SharpConstant full = sharp_constant_K(4, 4);
    CHECK_FALSE(full.K_printed.has_value());
    CHECK_FALSE(full.K_printed_simplified.has_value());
    CHECK_THROWS_AS(sharp_constant_K(3, 1), DomainError);
    CHECK_THROWS_AS(sharp_constant_K(2, 2), DomainError);
    CHECK_THROWS_AS(sharp_constant_K(3, 4), DomainError);
}

TEST_CASE("normalized extremal has unit constraint and energy Lambda") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {4, 3}, {5, 3}}) {
        CAPTURE(n);
        CAPTURE(k);
        const SharpConstant c = sharp_constant_K(n, k);
        for (double lambda : {0.5, 1.0, 2.0}) {
            const ExtremalProfile v({n, k, lambda, {}}, c.Lambda);
            const double q = 2.0 * (n - 1) / (n - 2);
            const auto N = integrate_cylindrical([&](double rho, double r) { return std::pow(v(rho, r), q); }, n, k,
                                                 1.0, {}, 1e-10);
            CHECK(N.value == doctest::Approx(1.0).epsilon(1e-8));
            // |grad v|^2 for v = c d^{-(n-2)/2}, d = (rho+p)^2 + r^2, is c^2 (n-2)^2 d^{-(n-1)}
            const double pre = v.prefactor(), sh = v.shift();
            const auto E = integrate_cylindrical(
                [&](double rho, double r) {
                    const double d = (rho + sh) * (rho + sh) + r * r;
                    return pre * pre * (n - 2.0) * (n - 2.0) * std::pow(d, -(n - 1.0));
                },
                n, k, 0.0, {}, 1e-10);
            CHECK(E.value == doctest::Approx(c.Lambda).epsilon(1e-8));
        }
    }
}

TEST_CASE("extremal_v examples") {
    const SharpConstant c = sharp_constant_K(3, 2);
    const ExtremalParams params{3, 2, 1.0, {}};
    const std::array<double, 1> y0{0.0};
    CHECK(extremal_v(params, c, 0.0, y0, ExtremalConvention::printed) ==
          doctest::Approx(2.0 / (c.K * c.K)).epsilon(1e-14));
    CHECK(extremal_v(params, c, 0.0, y0, ExtremalConvention::normalized) ==
          doctest::Approx(2.0 * c.K).epsilon(1e-14));

    // v |z|^{n-2} -> lambda^{-(n-2)} ((n-2)/2)^{n-2} K^{-(n-1)}
    for (double lambda : {0.5, 1.0, 2.0}) {
        const ExtremalParams pl{3, 2, lambda, {}};
        const double limit = 0.5 / (lambda * c.K * c.K);
        const double R = 1e7;
        const std::array<double, 1> y{R / std::sqrt(2.0)};
        CHECK(extremal_v(pl, c, R / std::sqrt(2.0), y, ExtremalConvention::printed) * R ==
              doctest::Approx(limit).epsilon(1e-6));
    }
}

TEST_CASE("extremal_v translates in y") {
    const SharpConstant c = sharp_constant_K(4, 2);
    const ExtremalParams shifted{4, 2, 1.3, {0.5, -1.0}};
    const ExtremalParams centered{4, 2, 1.3, {}};
    const std::array<double, 2> y{1.5, 1.0}, y_rel{1.0, 2.0};
    CHECK(extremal_v(shifted, c, 0.7, y) == doctest::Approx(extremal_v(centered, c, 0.7, y_rel)).epsilon(1e-14));
    const std::array<double, 1> bad{0.0};
    CHECK_THROWS_AS(extremal_v(centered, c, 0.7, bad), DomainError);
    CHECK_THROWS_AS(extremal_v(centered, c, -0.1, y), DomainError);
}

TEST_CASE("prop4_solution examples") {
    const std::array<double, 2> x{0.3, 0.4}, y{1.0, 0.0};
    auto v = prop4_solution({1, 1, 1.0, 1.0, 1.0}, x, y);
    CHECK(v.p_coef == doctest::Approx(2));
    CHECK(v.q_coef == doctest::Approx(2));
    // n = 4: ((0.5 + 1)^2 + (1 + 1)^2)^{-1}
    CHECK(v.value == doctest::Approx(1.0 / 6.25));

    const std::array<double, 3> x3{0.1, 0.2, 0.2};
    const std::array<double, 2> y2{0.6, 0.8};
    v = prop4_solution({2, 1, 2.0, 1.0, 0.0}, x3, y2);
    CHECK(v.p_coef == doctest::Approx(24));
    CHECK(v.q_coef == doctest::Approx(0));

    v = prop4_solution({1, 1, 2.0, 0.0, 0.0}, x, y);
    const double z = std::sqrt(0.25 + 1.0);
    CHECK(v.value == doctest::Approx(std::pow(2.0, -2) * std::pow(z, -2)));
    CHECK(v.p_coef == 0.0);
    CHECK(v.q_coef == 0.0);
}

TEST_CASE("prop4 pole and argument errors") {
    const std::array<double, 2> zero{0.0, 0.0};
    CHECK_THROWS_AS(prop4_solution({1, 1, 1.0, 0.0, 0.0}, zero, zero), SingularityError);
    CHECK_THROWS_AS(prop4_value({1, 1, 1.0, -1.0, -2.0}, 1.0, 2.0), SingularityError);
    CHECK_NOTHROW(prop4_value({1, 1, 1.0, -1.0, -2.0}, 1.0, 1.0));
    const std::array<double, 3> x3{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(prop4_solution({1, 1, 1.0, 0.0, 0.0}, x3, zero), DomainError);
}

TEST_CASE("fundamental_solution") {
    CHECK(fundamental_solution(3, 1.0) == doctest::Approx(1.0 / (4 * pi)));
    CHECK(fundamental_solution(4, 2.0) == doctest::Approx(1.0 / (8 * ball_volume(4)) / 4));
    for (int n = 3; n <= 7; ++n)
        CHECK(fundamental_solution(n, 2.6) == doctest::Approx(std::pow(2.0, 2 - n) * fundamental_solution(n, 1.3)));
    CHECK_THROWS_AS(fundamental_solution(3, 0.0), SingularityError);
}

namespace {

double norm(std::span<const double> z) {
    double s = 0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("Kelvin transform is an involution") {
    const int n = 3;
    PointFunction u = [](std::span<const double> z) {
        return std::exp(-z[0] * z[0]) * (1.0 + z[1] * z[2]) + std::cos(z[2]);
    };
    const PointFunction ku = kelvin_transform(u, n);
    const PointFunction kku = kelvin_transform(ku, n);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const std::array<double, 3> z{d(rng), d(rng), d(rng)};
        CHECK(kku(z) == doctest::Approx(u(z)).epsilon(1e-12));
    }
}

TEST_CASE("Kelvin transform of the fundamental profile is 1") {
    for (int n = 3; n <= 6; ++n) {
        const PointFunction k = kelvin_transform([n](std::span<const double> z) { return std::pow(norm(z), 2 - n); }, n);
        std::vector<double> z(n, 0.0);
        for (int i = 0; i < n; ++i) z[i] = 0.3 + 0.7 * i;
        CHECK(k(z) == doctest::Approx(1.0).epsilon(1e-13));
        std::vector<double> zero(n, 0.0);
        CHECK_THROWS_AS(k(zero), SingularityError);
        std::vector<double> wrong(n + 1, 1.0);
        CHECK_THROWS_AS(k(wrong), DomainError);
    }
}

namespace {

// Dirichlet energy over t0 <= |z| <= t1 in R^3 by nested quadrature in spherical
// coordinates, with the gradient by central differences.
double annulus_energy(const PointFunction& f, double t0, double t1) {
    auto grad2 = [&](double x, double y, double z) {
        const double h = 1e-5;
        double g = 0;
        for (int i = 0; i < 3; ++i) {
            std::array<double, 3> a{x, y, z}, b{x, y, z};
            a[i] += h;
            b[i] -= h;
            const double d = (f(a) - f(b)) / (2 * h);
            g += d * d;
        }
        return g;
    };
    return integrate_interval(
               [&](double t) {
                   return integrate_interval(
                              [&](double th) {
                                  return integrate_interval(
                                             [&](double ph) {
                                                 const double st = std::sin(th);
                                                 return grad2(t * st * std::cos(ph), t * st * std::sin(ph),
                                                              t * std::cos(th)) *
                                                        t * t * st;
                                             },
                                             0.0, 2 * pi, 1e-9)
                                      .value;
                              },
                              0.0, pi, 1e-9)
                          .value;
               },
               t0, t1, 1e-9)
        .value;
}

} // namespace

TEST_CASE("Kelvin transform preserves Dirichlet energy on an annulus") {
    // u vanishes on |w| = 1/2 and |w| = 1, so the boundary flux term drops out.
    const PointFunction u = [](std::span<const double> w) {
        const double w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        return (w2 - 0.25) * (1.0 - w2) * (1.0 + w[0] + 0.5 * w[1] * w[2]);
    };
    const PointFunction ku = kelvin_transform(u, 3);
    const double e_inner = annulus_energy(u, 0.5, 1.0);
    const double e_outer = annulus_energy(ku, 1.0, 2.0);
    CHECK(e_inner > 0.0);
    CHECK(std::abs(e_outer - e_inner) <= 1e-6 * e_inner);
}

TEST_CASE("Kelvin energy identity with the boundary term") {
    // For general u the energies differ by (n-2) [ integral u^2/|w| over the sphere ] between the radii.
    const PointFunction u = [](std::span<const double> w) { return 1.0 / (1.0 + w[0] * w[0] + 2 * w[2] * w[2]); };
    const PointFunction ku = kelvin_transform(u, 3);
    auto sphere_term = [&](double t) {
        return integrate_interval(
                   [&](double th) {
                       return integrate_interval(
                                  [&](double ph) {
                                      const double st = std::sin(th);
                                      const std::array<double, 3> w{t * st * std::cos(ph), t * st * std::sin(ph),
                                                                    t * std::cos(th)};
                                      const double v = u(w);
                                      return v * v / t * t * t * st;
                                  },
                                  0.0, 2 * pi, 1e-11)
                           .value;
                   },
                   0.0, pi, 1e-11)
            .value;
    };
    const double boundary = sphere_term(1.0) - sphere_term(0.5);
    const double e_inner = annulus_energy(u, 0.5, 1.0);
    const double e_outer = annulus_energy(ku, 1.0, 2.0);
    CHECK(std::abs(e_outer - (e_inner + boundary)) <= 1e-6 * e_outer);
    CHECK(std::abs(boundary) > 1e-2 * e_outer);
}
