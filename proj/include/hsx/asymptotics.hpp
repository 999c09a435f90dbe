#pragma once

// Power-law decay fits along rays of the (rho, r) quadrant and the local
// sup-over-mean ratio of a positive field.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hsx/cylinder_grid.hpp"

namespace hsx {

enum class RayDirection { rho_axis, r_axis, diagonal };

struct RaySamples {
    RayDirection direction = RayDirection::diagonal;
    std::vector<double> radii;
    std::vector<double> values;
};

/// value ~ amplitude * radius^{-exponent}.
struct DecayFit {
    double exponent = 0;
    double amplitude = 0;
    double r_squared = 0;
    std::size_t samples = 0;

    bool conclusive() const { return r_squared >= 0.99; }
};

/// (rho, r) of the point at distance t along the ray.
std::pair<double, double> ray_point(RayDirection direction, double t);

/// count radii geometrically spaced in [lo, hi].
std::vector<double> geometric_radii(double lo, double hi, std::size_t count);

RaySamples sample_ray(const std::function<double(double, double)>& f, RayDirection direction,
                      std::span<const double> radii);
/// Bilinear samples, clamped to the node range.
RaySamples sample_ray(const CylGrid& grid, RayDirection direction, std::span<const double> radii);

/// Least-squares line through (log radius, log value). FitDomainError with
/// fewer than 4 samples, radii spanning less than a factor of 8, or non-positive values.
DecayFit fit_decay(const RaySamples& samples);

/// Radius along the ray where the field first falls to half of its value at the
/// first node.
double core_scale(const CylGrid& grid, RayDirection direction = RayDirection::diagonal);

enum class DecayMode { subsolution_upper, solution_two_sided, general_p };

struct DecayVerdict {
    bool pass = false;
    double target = 0;  ///< n-2 for p = 2, (n-p)/(p-1) for general_p
    double tol = 0;
    std::string rule;
};

/// subsolution_upper: exponent >= n-2-tol (p = 2).
/// solution_two_sided: |exponent - (n-2)| <= tol (p = 2).
/// general_p: exponent >= (n-p)/(p-1) - tol.
/// FitDomainError on an inconclusive fit.
DecayVerdict check_decay_bounds(const DecayFit& fit, int n, double p, DecayMode mode, double tol = 0.1);

/// Center z at distance center_radius along the ray, R = center_radius/2.
/// Returns max of u over nodes with |(rho, r) - z| <= R/2 divided by
/// (mean of u^q0 over |(rho, r) - z| <= R)^{1/q0}, the mean taken with the
/// cylindrical measure rho^{k-1} r^{n-k-1} on dual cells.
double local_sup_ratio(const CylGrid& grid, double center_radius, double q0,
                       RayDirection direction = RayDirection::diagonal, double p = 2.0);

RayDirection parse_direction(const std::string& name);
std::string to_string(RayDirection direction);
DecayMode parse_decay_mode(const std::string& name);
std::string to_string(DecayMode mode);

} // namespace hsx
