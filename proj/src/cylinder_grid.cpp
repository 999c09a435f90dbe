#include "hsx/cylinder_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsx/errors.hpp"
#include "hsx/special_fn.hpp"

namespace hsx {

namespace {

const char* const kModule = "cylinder_grid";

using Row = AxisStencil::Row;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(kModule, what);
}

std::vector<double> nodes(double x_max, int count, double grading) {
    std::vector<double> x(count);
    for (int i = 1; i <= count; ++i)
        x[i - 1] = x_max * std::pow(static_cast<double>(i) / count, grading);
    return x;
}

// Row entries for a local stencil given as (node index list, weights).
Row make_row(std::span<const int> idx, std::span<const double> w) {
    Row row;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        auto it = std::find_if(row.begin(), row.end(), [&](const auto& e) { return e.first == idx[m]; });
        if (it == row.end())
            row.emplace_back(idx[m], w[m]);
        else
            it->second += w[m];
    }
    return row;
}

double apply(const Row& row, const CylGrid& g, std::size_t fixed, bool along_rho) {
    double acc = 0.0;
    for (const auto& [m, w] : row) acc += w * (along_rho ? g.at(m, fixed) : g.at(fixed, m));
    return acc;
}

void require_positive(const CylGrid& g, const char* what) {
    for (double v : g.values)
        if (!(v > 0.0)) throw DomainError(kModule, std::string(what) + " requires positive grid values");
}

struct Stencils {
    AxisStencil rho;
    AxisStencil r;
};

Stencils stencils_for(const CylGrid& g, const StencilOptions& opts) {
    Stencils st;
    st.rho = axis_stencil(g.rho, opts.rho_axis);
    if (g.has_r()) st.r = axis_stencil(g.r, opts.r_axis);
    return st;
}

double power_integral(double lo, double hi, double e) {
    return (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

} // namespace

CylGrid CylGrid::with_values(std::vector<double> v) const {
    require(v.size() == n_rho() * n_r(), "value count does not match the grid");
    CylGrid g;
    g.n = n;
    g.k = k;
    g.grading = grading;
    g.rho = rho;
    g.r = r;
    g.values = std::move(v);
    return g;
}

CylGrid build_grid(int n, int k, double rho_max, double r_max, int n_rho, int n_r, double grading) {
    require(n >= 3 && k >= 2 && k <= n, "grid requires n >= 3 and 2 <= k <= n");
    require(n_rho >= 8 && (k == n || n_r >= 8), "grid requires at least 8 nodes per dimension");
    require(grading >= 1.0 && std::isfinite(grading), "grading must be >= 1");
    require(rho_max > 0.0 && std::isfinite(rho_max), "rho_max must be positive");
    require(k == n || (r_max > 0.0 && std::isfinite(r_max)), "r_max must be positive");
    CylGrid g;
    g.n = n;
    g.k = k;
    g.grading = grading;
    g.rho = nodes(rho_max, n_rho, grading);
    if (k < n) g.r = nodes(r_max, n_r, grading);
    g.values.assign(g.n_rho() * g.n_r(), 0.0);
    return g;
}

CylGrid sample(const CylGrid& grid, const std::function<double(double, double)>& f) {
    std::vector<double> v(grid.n_rho() * grid.n_r());
    for (std::size_t i = 0; i < grid.n_rho(); ++i)
        for (std::size_t j = 0; j < grid.n_r(); ++j) v[i * grid.n_r() + j] = f(grid.rho[i], grid.r_at(j));
    return grid.with_values(std::move(v));
}

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m) {
    const int count = static_cast<int>(x.size());
    require(count > m && m >= 0, "fd_weights needs more nodes than the derivative order");
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(count, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < count; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int d = mn; d >= 1; --d)
                    c[d][i] = c1 * (d * c[d - 1][i - 1] - c5 * c[d][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int d = mn; d >= 1; --d) c[d][j] = (c4 * c[d][j] - d * c[d - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

AxisStencil axis_stencil(std::span<const double> x, AxisClosure closure) {
    const int count = static_cast<int>(x.size());
    if (count < 3) throw DomainError(kModule, "too few nodes: stencils need at least 3 per dimension");
    AxisStencil st;
    st.d1.resize(count);
    st.d2.resize(count);

    if (closure == AxisClosure::even_reflection) {
        const double pts[3] = {-x[0], x[0], x[1]};
        const int idx[3] = {0, 0, 1};
        const auto w = fd_weights(x[0], pts, 2);
        st.d1[0] = make_row(idx, w[1]);
        st.d2[0] = make_row(idx, w[2]);
    } else {
        if (count < 4) throw DomainError(kModule, "too few nodes: axis extrapolation needs 4 per dimension");
        const double base[4] = {x[0], x[1], x[2], x[3]};
        const auto e = fd_weights(0.0, base, 0)[0];
        const double pts[3] = {0.0, x[0], x[1]};
        const auto w = fd_weights(x[0], pts, 2);
        const int idx[6] = {0, 1, 2, 3, 0, 1};
        for (int d = 1; d <= 2; ++d) {
            const double ww[6] = {w[d][0] * e[0], w[d][0] * e[1], w[d][0] * e[2], w[d][0] * e[3], w[d][1], w[d][2]};
            (d == 1 ? st.d1[0] : st.d2[0]) = make_row(idx, ww);
        }
    }

    for (int i = 1; i + 1 < count; ++i) {
        const double pts[3] = {x[i - 1], x[i], x[i + 1]};
        const int idx[3] = {i - 1, i, i + 1};
        const auto w = fd_weights(x[i], pts, 2);
        st.d1[i] = make_row(idx, w[1]);
        st.d2[i] = make_row(idx, w[2]);
    }

    const int last = count - 1;
    {
        const double pts[3] = {x[last - 2], x[last - 1], x[last]};
        const int idx[3] = {last - 2, last - 1, last};
        st.d1[last] = make_row(idx, fd_weights(x[last], pts, 1)[1]);
    }
    {
        const int width = std::min(4, count);
        std::vector<double> pts(x.end() - width, x.end());
        std::vector<int> idx(width);
        for (int m = 0; m < width; ++m) idx[m] = count - width + m;
        st.d2[last] = make_row(idx, fd_weights(x[last], pts, 2)[2]);
    }
    return st;
}

CylGrid cyl_laplacian(const CylGrid& grid, const StencilOptions& opts) {
    const Stencils st = stencils_for(grid, opts);
    const double a = grid.a(), b = grid.b();
    CylGrid out = grid.with_values(std::vector<double>(grid.values.size(), 0.0));
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        for (std::size_t j = 0; j < grid.n_r(); ++j) {
            double v = apply(st.rho.d2[i], grid, j, true);
            if (a != 0.0) v += a / grid.rho[i] * apply(st.rho.d1[i], grid, j, true);
            if (grid.has_r()) {
                v += apply(st.r.d2[j], grid, i, false);
                if (b != 0.0) v += b / grid.r[j] * apply(st.r.d1[j], grid, i, false);
            }
            out.at(i, j) = v;
        }
    }
    return out;
}

std::pair<CylGrid, CylGrid> cyl_gradient(const CylGrid& grid, const StencilOptions& opts) {
    const Stencils st = stencils_for(grid, opts);
    CylGrid gr = grid.with_values(std::vector<double>(grid.values.size(), 0.0));
    CylGrid gz = gr;
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        for (std::size_t j = 0; j < grid.n_r(); ++j) {
            gr.at(i, j) = apply(st.rho.d1[i], grid, j, true);
            if (grid.has_r()) gz.at(i, j) = apply(st.r.d1[j], grid, i, false);
        }
    }
    return {gr, gz};
}

std::vector<double> axis_derivative_rho(const CylGrid& grid) {
    const double pts[3] = {grid.rho[0], grid.rho[1], grid.rho[2]};
    const auto w = fd_weights(0.0, pts, 1)[1];
    std::vector<double> out(grid.n_r());
    for (std::size_t j = 0; j < grid.n_r(); ++j)
        out[j] = w[0] * grid.at(0, j) + w[1] * grid.at(1, j) + w[2] * grid.at(2, j);
    return out;
}

std::vector<double> moment_weights(std::span<const double> x, double e) {
    require(e > -1.0, "moment weights require e > -1");
    const std::size_t count = x.size();
    std::vector<double> w(count, 0.0);
    w[0] = std::pow(x[0], e + 1.0) / (e + 1.0);
    for (std::size_t i = 1; i < count; ++i) {
        const double lo = x[i - 1], hi = x[i], h = hi - lo;
        const double i0 = power_integral(lo, hi, e);
        const double i1 = power_integral(lo, hi, e + 1.0);
        const double right = (i1 - lo * i0) / h;  // integral of (x - lo) x^e / h
        w[i] += right;
        w[i - 1] += i0 - right;
    }
    return w;
}

std::vector<double> cell_weights(std::span<const double> x, double e) {
    require(e > -1.0, "cell weights require e > -1");
    const std::size_t count = x.size();
    std::vector<double> w(count);
    double lo = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double hi = i + 1 < count ? 0.5 * (x[i] + x[i + 1]) : x[i];
        w[i] = power_integral(lo, hi, e);
        lo = hi;
    }
    return w;
}

namespace {

double weighted_sum(const CylGrid& grid, double e_rho, const std::function<double(std::size_t, std::size_t)>& f) {
    const auto wr = moment_weights(grid.rho, e_rho);
    double total = 0.0;
    if (!grid.has_r()) {
        for (std::size_t i = 0; i < grid.n_rho(); ++i) total += wr[i] * f(i, 0);
        return sphere_measure(grid.k) * total;
    }
    const auto wz = moment_weights(grid.r, grid.n - grid.k - 1);
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < grid.n_r(); ++j) row += wz[j] * f(i, j);
        total += wr[i] * row;
    }
    return sphere_measure(grid.k) * sphere_measure(grid.n - grid.k) * total;
}

} // namespace

double gradient_energy(const CylGrid& grid, double p_exp, const StencilOptions& opts) {
    require(p_exp >= 1.0, "gradient energy requires p >= 1");
    const auto [gr, gz] = cyl_gradient(grid, opts);
    return weighted_sum(grid, grid.k - 1, [&](std::size_t i, std::size_t j) {
        const double g2 = gr.at(i, j) * gr.at(i, j) + gz.at(i, j) * gz.at(i, j);
        return p_exp == 2.0 ? g2 : std::pow(g2, 0.5 * p_exp);
    });
}

double weighted_integral(const CylGrid& grid, double s, const std::function<double(double)>& f) {
    require(0.0 <= s && s < grid.k, "weighted integral requires 0 <= s < k");
    return weighted_sum(grid, grid.k - 1 - s, [&](std::size_t i, std::size_t j) { return f(grid.at(i, j)); });
}

CylGrid el_residual(const CylGrid& grid, double Lambda, double s, const StencilOptions& opts) {
    require_positive(grid, "el_residual");
    require(0.0 <= s && s < 2.0, "el_residual requires 0 <= s < 2");
    const double power = 2.0 * (grid.n - s) / (grid.n - 2.0) - 1.0;
    CylGrid out = cyl_laplacian(grid, opts);
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        const double weight = s == 0.0 ? Lambda : Lambda * std::pow(grid.rho[i], -s);
        for (std::size_t j = 0; j < grid.n_r(); ++j)
            out.at(i, j) += weight * std::pow(grid.at(i, j), power);
    }
    return out;
}

CylGrid prop41_residual(const CylGrid& phi_grid, const Prop4Params& params) {
    require(phi_grid.has_r(), "prop41_residual needs both rho and r");
    require(phi_grid.a() == params.a && phi_grid.b() == params.b, "grid (a, b) does not match params");
    require_positive(phi_grid, "prop41_residual");
    const StencilOptions opts{AxisClosure::extrapolation, AxisClosure::extrapolation};
    const Stencils st = stencils_for(phi_grid, opts);
    const double a = params.a, b = params.b;
    const double l2 = params.lambda * params.lambda;
    const double drift = 0.5 * (a + b + 2.0);
    CylGrid out = phi_grid.with_values(std::vector<double>(phi_grid.values.size(), 0.0));
    for (std::size_t i = 0; i < phi_grid.n_rho(); ++i) {
        const double rho = phi_grid.rho[i];
        for (std::size_t j = 0; j < phi_grid.n_r(); ++j) {
            const double r = phi_grid.r[j];
            const double phi = phi_grid.at(i, j);
            const double pr = apply(st.rho.d1[i], phi_grid, j, true);
            const double pz = apply(st.r.d1[j], phi_grid, i, false);
            const double lap2 = apply(st.rho.d2[i], phi_grid, j, true) + apply(st.r.d2[j], phi_grid, i, false);
            out.at(i, j) = lap2 - drift * (pr * pr + pz * pz) / phi + a / rho * pr + b / r * pz -
                           2.0 * a * l2 * params.alpha / rho - 2.0 * b * l2 * params.beta / r;
        }
    }
    return out;
}

CylGrid prop42_residual(const CylGrid& v_grid, const Prop4Params& params, const StencilOptions& opts) {
    require(v_grid.has_r(), "prop42_residual needs both rho and r");
    require(v_grid.a() == params.a && v_grid.b() == params.b, "grid (a, b) does not match params");
    require_positive(v_grid, "prop42_residual");
    const double power = v_grid.n / (v_grid.n - 2.0);
    const double p = params.p_coef(), q = params.q_coef();
    CylGrid out = cyl_laplacian(v_grid, opts);
    for (std::size_t i = 0; i < v_grid.n_rho(); ++i)
        for (std::size_t j = 0; j < v_grid.n_r(); ++j)
            out.at(i, j) += std::pow(v_grid.at(i, j), power) * (p / v_grid.rho[i] + q / v_grid.r[j]);
    return out;
}

double max_abs_interior(const CylGrid& grid, std::size_t skip_outer) {
    const std::size_t ni = grid.n_rho() > skip_outer ? grid.n_rho() - skip_outer : 0;
    const std::size_t nj = grid.has_r() ? (grid.n_r() > skip_outer ? grid.n_r() - skip_outer : 0) : 1;
    double m = 0.0;
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) m = std::max(m, std::abs(grid.at(i, j)));
    return m;
}

namespace {

// Index lo and fraction t with x clamped to [x_0, x_{N-1}].
std::pair<std::size_t, double> locate(const std::vector<double>& x, double v) {
    if (v <= x.front()) return {0, 0.0};
    if (v >= x.back()) return {x.size() - 2, 1.0};
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    return {hi - 1, (v - x[hi - 1]) / (x[hi] - x[hi - 1])};
}

} // namespace

double interpolate(const CylGrid& grid, double rho, double r) {
    const auto [i, t] = locate(grid.rho, rho);
    if (!grid.has_r()) return (1.0 - t) * grid.at(i, 0) + t * grid.at(i + 1, 0);
    const auto [j, u] = locate(grid.r, r);
    return (1.0 - t) * ((1.0 - u) * grid.at(i, j) + u * grid.at(i, j + 1)) +
           t * ((1.0 - u) * grid.at(i + 1, j) + u * grid.at(i + 1, j + 1));
}

} // namespace hsx
