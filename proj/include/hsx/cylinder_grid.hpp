#pragma once

// Finite differences for cylindrically symmetric functions U(rho, r),
// rho = |x| (x in R^k), r = |y| (y in R^{n-k}). The reduced Laplacian is
//   U_rhorho + (a/rho) U_rho + U_rr + (b/r) U_r,   a = k-1, b = n-k-1.
// Nodes are strictly positive; the axes enter only through ghost values.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsx/closed_forms.hpp"

namespace hsx {

struct CylGrid {
    int n = 3;
    int k = 2;
    double grading = 1.0;
    std::vector<double> rho;     ///< strictly increasing, positive
    std::vector<double> r;       ///< strictly increasing, positive; empty when k = n
    std::vector<double> values;  ///< row-major, values[i * n_r() + j]

    int a() const { return k - 1; }
    int b() const { return n - k - 1; }
    bool has_r() const { return k < n; }
    std::size_t n_rho() const { return rho.size(); }
    /// Number of r columns in storage: 1 when k = n.
    std::size_t n_r() const { return has_r() ? r.size() : 1; }
    double r_at(std::size_t j) const { return has_r() ? r[j] : 0.0; }

    double& at(std::size_t i, std::size_t j) { return values[i * n_r() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * n_r() + j]; }

    /// Same nodes, new values.
    CylGrid with_values(std::vector<double> v) const;
};

/// Nodes x_i = x_max (i/N)^grading, i = 1..N. r arguments are ignored for k = n.
CylGrid build_grid(int n, int k, double rho_max, double r_max, int n_rho, int n_r,
                   double grading = 2.0);

/// Grid with U(rho_i, r_j) = f(rho_i, r_j); r = 0 when k = n.
CylGrid sample(const CylGrid& grid, const std::function<double(double, double)>& f);

/// Ghost-value rule at an axis.
///  even_reflection: U(-x_1) = U(x_1), valid for fields even across the axis.
///  extrapolation:   U(0) by the cubic through the first four nodes, valid
///                   for fields that are only one-sided smooth (e.g. Lipschitz
///                   in |x| at x = 0, like the extremal family).
enum class AxisClosure { even_reflection, extrapolation };

struct StencilOptions {
    AxisClosure rho_axis = AxisClosure::extrapolation;
    AxisClosure r_axis = AxisClosure::even_reflection;
};

/// Finite-difference weights for derivatives 0..m at z on nodes x
/// (Fornberg's recursion). Result[d][j] is the weight of x[j] for derivative d.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m);

/// First and second derivative stencils along one axis, expressed on node indices.
struct AxisStencil {
    using Row = std::vector<std::pair<int, double>>;
    std::vector<Row> d1;
    std::vector<Row> d2;
};

/// Three-point central stencils inside, the axis ghost at the first node,
/// three-point (d1) and four-point (d2) one-sided stencils at the last node.
AxisStencil axis_stencil(std::span<const double> x, AxisClosure closure);

CylGrid cyl_laplacian(const CylGrid& grid, const StencilOptions& opts = {});

/// (U_rho, U_r) at nodes; U_r is zero when k = n.
std::pair<CylGrid, CylGrid> cyl_gradient(const CylGrid& grid, const StencilOptions& opts = {});

/// U_rho at rho = 0 for every r column, from the quadratic through the first
/// three rho nodes.
std::vector<double> axis_derivative_rho(const CylGrid& grid);

/// integral_0^{x_N} hat_i(x) x^e dx for the piecewise-linear interpolant that is
/// constant on [0, x_1]. Requires e > -1.
std::vector<double> moment_weights(std::span<const double> x, double e);

/// integral over the dual cell [m_{i-1/2}, m_{i+1/2}] of x^e, m_{1/2} = 0,
/// m_{N+1/2} = x_N.
std::vector<double> cell_weights(std::span<const double> x, double e);

/// sigma_k sigma_{n-k} sum |grad U|^p rho^{k-1} r^{n-k-1} with trapezoid-type
/// moment weights.
double gradient_energy(const CylGrid& grid, double p_exp, const StencilOptions& opts = {});

/// sigma_k sigma_{n-k} sum f(U) rho^{k-1-s} r^{n-k-1}, same weights.
double weighted_integral(const CylGrid& grid, double s, const std::function<double(double)>& f);

/// Delta U + Lambda rho^{-s} U^{2*(s)-1}, 2*(s) = 2(n-s)/(n-2). DomainError unless U > 0.
CylGrid el_residual(const CylGrid& grid, double Lambda, double s, const StencilOptions& opts = {});

/// Planar form of the two-parameter family:
///   phi_rhorho + phi_rr - ((a+b+2)/2)|grad phi|^2/phi + (a/rho) phi_rho + (b/r) phi_r
///   - 2 a lambda^2 alpha / rho - 2 b lambda^2 beta / r.
/// Both axes use extrapolation because phi is not even across them when
/// alpha, beta != 0.
CylGrid prop41_residual(const CylGrid& phi_grid, const Prop4Params& params);

/// Delta_cyl v + v^{n/(n-2)} (p/rho + q/r) with p, q the coefficients of params.
CylGrid prop42_residual(const CylGrid& v_grid, const Prop4Params& params,
                        const StencilOptions& opts = {AxisClosure::extrapolation,
                                                      AxisClosure::extrapolation});

/// Max |U| over nodes with i < n_rho - skip_outer and j < n_r - skip_outer.
double max_abs_interior(const CylGrid& grid, std::size_t skip_outer = 1);

/// Bilinear interpolation, clamped to the node range.
double interpolate(const CylGrid& grid, double rho, double r);

/// Writes "# n=..,k=..,grading=.." then "rho,r,value" rows with 17 significant digits.
void write_grid_csv(const CylGrid& grid, std::ostream& out);
void write_grid_csv(const CylGrid& grid, const std::string& path);
CylGrid read_grid_csv(std::istream& in);
CylGrid read_grid_csv(const std::string& path);

} // namespace hsx
