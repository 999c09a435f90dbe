#include "hsx/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsx/errors.hpp"

namespace hsx {

namespace {

const char* const kModule = "asymptotics";

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(kModule, what);
}

} // namespace

std::pair<double, double> ray_point(RayDirection direction, double t) {
    switch (direction) {
    case RayDirection::rho_axis: return {t, 0.0};
    case RayDirection::r_axis: return {0.0, t};
    case RayDirection::diagonal: break;
    }
    return {t / std::sqrt(2.0), t / std::sqrt(2.0)};
}

std::vector<double> geometric_radii(double lo, double hi, std::size_t count) {
    require(lo > 0.0 && hi > lo && count >= 2, "geometric radii need 0 < lo < hi and count >= 2");
    std::vector<double> t(count);
    const double step = std::log(hi / lo) / (count - 1);
    for (std::size_t i = 0; i < count; ++i) t[i] = lo * std::exp(step * i);
    t.back() = hi;
    return t;
}

RaySamples sample_ray(const std::function<double(double, double)>& f, RayDirection direction,
                      std::span<const double> radii) {
    RaySamples out{direction, {radii.begin(), radii.end()}, {}};
    for (double t : radii) {
        const auto [rho, r] = ray_point(direction, t);
        out.values.push_back(f(rho, r));
    }
    return out;
}

RaySamples sample_ray(const CylGrid& grid, RayDirection direction, std::span<const double> radii) {
    require(grid.has_r() || direction == RayDirection::rho_axis, "k = n grids only have the rho ray");
    return sample_ray([&](double rho, double r) { return interpolate(grid, rho, r); }, direction, radii);
}

DecayFit fit_decay(const RaySamples& s) {
    const std::size_t m = s.radii.size();
    if (m < 4 || s.values.size() != m) throw FitDomainError(kModule, "need at least 4 samples");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(s.radii[i] > 0.0) || (i > 0 && !(s.radii[i] > s.radii[i - 1])))
            throw FitDomainError(kModule, "radii must be positive and strictly increasing");
        if (!(s.values[i] > 0.0) || !std::isfinite(s.values[i]))
            throw FitDomainError(kModule, "values must be positive");
    }
    // three octaves count as a decade, so 10..80 is accepted
    if (s.radii.back() < 8.0 * s.radii.front())
        throw FitDomainError(kModule, "radii must span at least one decade (ratio 8)");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += std::log(s.radii[i]);
        my += std::log(s.values[i]);
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(s.radii[i]) - mx, dy = std::log(s.values[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(s.radii[i]) - mx, dy = std::log(s.values[i]) - my;
        const double e = dy - slope * dx;
        ss_res += e * e;
    }
    DecayFit fit;
    fit.exponent = -slope;
    fit.amplitude = std::exp(my - slope * mx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.samples = m;
    return fit;
}

double core_scale(const CylGrid& grid, RayDirection direction) {
    const double t0 = direction == RayDirection::diagonal ? std::hypot(grid.rho[0], grid.r_at(0))
                      : direction == RayDirection::rho_axis ? grid.rho[0]
                                                            : grid.r_at(0);
    const double t1 = direction == RayDirection::r_axis ? grid.r.back()
                      : direction == RayDirection::rho_axis ? grid.rho.back()
                                                            : std::sqrt(2.0) * std::min(grid.rho.back(), grid.has_r() ? grid.r.back() : grid.rho.back());
    auto at = [&](double t) {
        const auto [rho, r] = ray_point(direction, t);
        return interpolate(grid, rho, r);
    };
    const double half = 0.5 * at(t0);
    require(half > 0.0, "core scale needs a positive center value");
    const auto ts = geometric_radii(std::max(t0, 1e-300), t1, 4000);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double v1 = at(ts[i]);
        if (v1 <= half) {
            double lo = ts[i - 1], hi = ts[i];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (at(mid) > half ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    throw FitDomainError(kModule, "field never drops to half its center value on this grid");
}

DecayVerdict check_decay_bounds(const DecayFit& fit, int n, double p, DecayMode mode, double tol) {
    if (!fit.conclusive()) {
        std::ostringstream os;
        os << "inconclusive fit (r^2 = " << fit.r_squared << " < 0.99)";
        throw FitDomainError(kModule, os.str());
    }
    require(n >= 3 && tol >= 0.0, "decay bounds require n >= 3 and tol >= 0");
    DecayVerdict v;
    v.tol = tol;
    switch (mode) {
    case DecayMode::subsolution_upper:
        require(p == 2.0, "subsolution-upper applies to p = 2");
        v.target = n - 2;
        v.pass = fit.exponent >= v.target - tol;
        v.rule = "exponent >= n-2-tol";
        break;
    case DecayMode::solution_two_sided:
        require(p == 2.0, "solution-two-sided applies to p = 2");
        v.target = n - 2;
        v.pass = std::abs(fit.exponent - v.target) <= tol;
        v.rule = "|exponent-(n-2)| <= tol";
        break;
    case DecayMode::general_p:
        require(1.0 < p && p < n, "general-p requires 1 < p < n");
        v.target = (n - p) / (p - 1.0);
        v.pass = fit.exponent >= v.target - tol;
        v.rule = "exponent >= (n-p)/(p-1)-tol";
        break;
    }
    return v;
}

double local_sup_ratio(const CylGrid& grid, double center_radius, double q0, RayDirection direction, double p) {
    if (!(q0 >= p)) {
        std::ostringstream os;
        os << "q0 = " << q0 << " must be >= p = " << p;
        throw DomainError(kModule, os.str());
    }
    require(center_radius > 0.0, "center radius must be positive");
    require(grid.has_r() || direction == RayDirection::rho_axis, "k = n grids only have the rho ray");
    const auto [rc, zc] = ray_point(direction, center_radius);
    const double R = 0.5 * center_radius;
    if (rc + R > grid.rho.back() || (grid.has_r() && zc + R > grid.r.back())) {
        std::ostringstream os;
        os << "ball of radius " << R << " around |z| = " << center_radius << " leaves the grid";
        throw DomainError(kModule, os.str());
    }
    const auto wr = cell_weights(grid.rho, grid.a());
    const auto wz = grid.has_r() ? cell_weights(grid.r, grid.b()) : std::vector<double>(1, 1.0);
    double sup = 0.0, mass = 0.0, integral = 0.0;
    std::size_t inner = 0;
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        const double dr = grid.rho[i] - rc;
        if (std::abs(dr) > R) continue;
        for (std::size_t j = 0; j < grid.n_r(); ++j) {
            const double dz = grid.r_at(j) - zc;
            const double d2 = dr * dr + dz * dz;
            if (d2 > R * R) continue;
            const double u = grid.at(i, j);
            if (!(u >= 0.0)) throw DomainError(kModule, "local_sup_ratio needs a non-negative field");
            const double w = wr[i] * wz[j];
            mass += w;
            integral += w * std::pow(u, q0);
            if (d2 <= 0.25 * R * R) {
                sup = std::max(sup, u);
                ++inner;
            }
        }
    }
    if (inner == 0) throw DomainError(kModule, "no grid node inside the half ball; refine the grid");
    if (!(integral > 0.0)) throw DomainError(kModule, "field vanishes on the ball");
    return sup / std::pow(integral / mass, 1.0 / q0);
}

RayDirection parse_direction(const std::string& name) {
    if (name == "rho-axis") return RayDirection::rho_axis;
    if (name == "r-axis") return RayDirection::r_axis;
    if (name == "diagonal") return RayDirection::diagonal;
    throw DomainError(kModule, "unknown direction '" + name + "' (rho-axis, r-axis, diagonal)");
}

std::string to_string(RayDirection d) {
    switch (d) {
    case RayDirection::rho_axis: return "rho-axis";
    case RayDirection::r_axis: return "r-axis";
    case RayDirection::diagonal: break;
    }
    return "diagonal";
}

DecayMode parse_decay_mode(const std::string& name) {
    if (name == "subsolution-upper") return DecayMode::subsolution_upper;
    if (name == "solution-two-sided") return DecayMode::solution_two_sided;
    if (name == "general-p") return DecayMode::general_p;
    throw DomainError(kModule, "unknown mode '" + name + "' (subsolution-upper, solution-two-sided, general-p)");
}

std::string to_string(DecayMode m) {
    switch (m) {
    case DecayMode::subsolution_upper: return "subsolution-upper";
    case DecayMode::solution_two_sided: return "solution-two-sided";
    case DecayMode::general_p: break;
    }
    return "general-p";
}

} // namespace hsx
