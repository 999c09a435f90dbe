#include "hsx/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "hsx/closed_forms.hpp"
#include "hsx/exponents.hpp"
#include "hsx/special_fn.hpp"

namespace hsx {

namespace {

const char* const kModule = "minimizer";

double face_integral(double lo, double hi, int e) {
    return (std::pow(hi, e + 1) - std::pow(lo, e + 1)) / (e + 1);
}

} // namespace

RayleighFunctional::RayleighFunctional(const CylGrid& layout, double s) : layout_(layout) {
    if (!(0.0 <= s && s < layout.k && s < 2.0))
        throw DomainError(kModule, "functional requires 0 <= s < min(k, 2)");
    layout_.values.assign(layout.n_rho() * layout.n_r(), 0.0);
    const int n = layout.n, k = layout.k, a = layout.a(), b = layout.b();
    q_ = 2.0 * (n - s) / (n - 2.0);
    ni_ = layout.n_rho() - 1;
    nj_ = layout.has_r() ? layout.n_r() - 1 : 1;
    const auto& rho = layout.rho;

    double sigma = sphere_measure(k);
    std::vector<double> wr_b(1, 1.0);
    if (layout.has_r()) {
        sigma *= sphere_measure(n - k);
        wr_b = moment_weights(layout.r, b);
    }
    const auto wp_a = moment_weights(rho, a);
    const auto wp_s = moment_weights(rho, a - s);

    const Eigen::Index dim = static_cast<Eigen::Index>(ni_ * nj_);
    mass_.resize(dim);
    W_.resize(dim);
    for (std::size_t i = 0; i < ni_; ++i)
        for (std::size_t j = 0; j < nj_; ++j) {
            mass_[i * nj_ + j] = sigma * wp_a[i] * wr_b[j];
            W_[i * nj_ + j] = sigma * wp_s[i] * wr_b[j];
        }

    std::vector<Eigen::Triplet<double>> trip;
    auto face = [&](std::size_t p, bool p_in, std::size_t m, bool m_in, double c) {
        if (p_in) trip.emplace_back(p, p, c);
        if (m_in) trip.emplace_back(m, m, c);
        if (p_in && m_in) {
            trip.emplace_back(p, m, -c);
            trip.emplace_back(m, p, -c);
        }
    };
    for (std::size_t i = 0; i < ni_; ++i) {
        const double h = rho[i + 1] - rho[i];
        const double f = face_integral(rho[i], rho[i + 1], a) / (h * h);
        for (std::size_t j = 0; j < nj_; ++j)
            face(i * nj_ + j, true, (i + 1) * nj_ + j, i + 1 < ni_, sigma * f * wr_b[j]);
    }
    if (layout.has_r()) {
        const auto& r = layout.r;
        for (std::size_t j = 0; j < nj_; ++j) {
            const double h = r[j + 1] - r[j];
            const double g = face_integral(r[j], r[j + 1], b) / (h * h);
            for (std::size_t i = 0; i < ni_; ++i)
                face(i * nj_ + j, true, i * nj_ + j + 1, j + 1 < nj_, sigma * g * wp_a[i]);
        }
    }
    A_.resize(dim, dim);
    A_.setFromTriplets(trip.begin(), trip.end());
}

Eigen::VectorXd RayleighFunctional::pack(const CylGrid& grid) const {
    if (grid.n_rho() != layout_.n_rho() || grid.n_r() != layout_.n_r())
        throw DomainError(kModule, "grid does not match the functional layout");
    Eigen::VectorXd u(size());
    for (std::size_t i = 0; i < ni_; ++i)
        for (std::size_t j = 0; j < nj_; ++j) u[i * nj_ + j] = grid.at(i, j);
    return u;
}

CylGrid RayleighFunctional::unpack(const Eigen::VectorXd& u) const {
    CylGrid g = layout_;
    for (std::size_t i = 0; i < ni_; ++i)
        for (std::size_t j = 0; j < nj_; ++j) g.at(i, j) = u[i * nj_ + j];
    return g;
}

double RayleighFunctional::energy(const Eigen::VectorXd& u) const { return u.dot(A_ * u); }

double RayleighFunctional::constraint(const Eigen::VectorXd& u) const {
    return W_.dot(u.cwiseAbs().array().pow(q_).matrix());
}

double RayleighFunctional::quotient(const Eigen::VectorXd& u) const {
    return energy(u) / std::pow(constraint(u), 2.0 / q_);
}

Eigen::VectorXd RayleighFunctional::quotient_gradient(const Eigen::VectorXd& u) const {
    const double E = energy(u), N = constraint(u);
    const Eigen::VectorXd gN = q_ * W_.cwiseProduct(u.cwiseAbs().array().pow(q_ - 1.0).matrix()
                                                        .cwiseProduct(u.cwiseSign()));
    const Eigen::VectorXd gE = 2.0 * (A_ * u);
    return std::pow(N, -2.0 / q_) * (gE - (2.0 / q_) * (E / N) * gN);
}

Eigen::VectorXd RayleighFunctional::flow_direction(const Eigen::VectorXd& u) const {
    const double E = energy(u), N = constraint(u);
    const Eigen::VectorXd nonlinear = W_.cwiseProduct(u.cwiseAbs().array().pow(q_ - 1.0).matrix());
    return (-(A_ * u) + (E / N) * nonlinear).cwiseQuotient(mass_);
}

namespace {

void normalize(const RayleighFunctional& F, Eigen::VectorXd& u) {
    const double N = F.constraint(u);
    if (!(N > 0.0) || !std::isfinite(N)) throw InternalConsistencyError(kModule, "state lost positivity");
    u *= std::pow(N, -1.0 / F.exponent());
}

} // namespace

MinimizeResult minimize_rayleigh(int n, int k, double s, const GridSpec& spec, const MinimizeOptions& opts) {
    if (!admissible({n, k, 2.0, s})) {
        std::ostringstream os;
        os << "inadmissible parameters n=" << n << " k=" << k << " p=2 s=" << s;
        throw DomainError(kModule, os.str());
    }
    if (!(opts.step > 0.0) || opts.max_iters < 1 || !(opts.tol > 0.0))
        throw DomainError(kModule, "step, max_iters and tol must be positive");

    const CylGrid layout = build_grid(n, k, spec.rho_max, spec.r_max, spec.n_rho, spec.n_r, spec.grading);
    const RayleighFunctional F(layout, s);
    const double q = F.exponent();

    CylGrid init;
    switch (opts.init) {
    case InitMode::positive_bump: {
        if (!(opts.init_width > 0.0)) throw DomainError(kModule, "init_width must be positive");
        const double w2 = opts.init_width * opts.init_width;
        init = sample(layout, [&](double rho, double r) {
            return std::pow(1.0 + (rho * rho + r * r) / w2, -0.5 * (n - 2));
        });
        break;
    }
    case InitMode::analytic_extremal: {
        if (k < 2) throw DomainError(kModule, "analytic extremal requires k >= 2");
        ExtremalParams ep{n, k, opts.init_lambda, {}};
        const ExtremalProfile v(ep, 1.0);
        init = sample(layout, [&](double rho, double r) { return v(rho, r); });
        break;
    }
    case InitMode::user_grid: {
        if (!opts.user_grid) throw DomainError(kModule, "user-grid initialization without a grid");
        const CylGrid& ug = *opts.user_grid;
        if (ug.n != n || ug.k != k) throw DomainError(kModule, "user grid (n, k) does not match");
        init = sample(layout, [&](double rho, double r) { return std::max(0.0, interpolate(ug, rho, r)); });
        break;
    }
    }

    Eigen::VectorXd u = F.pack(init);
    normalize(F, u);
    const Eigen::SparseMatrix<double>& A = F.stiffness();
    const Eigen::VectorXd& M = F.mass();
    const Eigen::VectorXd& W = F.constraint_weights();
    const Eigen::VectorXd Adiag = A.diagonal();

    MinimizeResult res;
    res.n = n;
    res.k = k;
    res.s = s;
    double E = F.energy(u);
    res.history.push_back({0, E, std::abs(F.constraint(u) - 1.0), opts.step});

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    Eigen::SparseMatrix<double> Msp(F.size(), F.size());
    {
        std::vector<Eigen::Triplet<double>> t;
        for (Eigen::Index i = 0; i < F.size(); ++i) t.emplace_back(i, i, M[i]);
        Msp.setFromTriplets(t.begin(), t.end());
    }
    solver.analyzePattern(Msp + A);

    double tau = opts.step;
    double factored_tau = -1.0;
    int accepted_streak = 0;

    auto finish = [&](int iters, bool converged) {
        res.E_min = E;
        res.grid = F.unpack(u);
        res.iterations = iters;
        res.converged = converged;
        res.K_est = E > 0.0 ? 1.0 / std::sqrt(E) : 0.0;
    };

    for (int it = 1; it <= opts.max_iters; ++it) {
        // Stiffness is implicit; only the nonlinear term can destabilize the step.
        const Eigen::VectorXd up = u.array().pow(q - 2.0).matrix();
        double lam_est = 0.0;
        for (Eigen::Index i = 0; i < F.size(); ++i)
            lam_est = std::max(lam_est, ((q - 1.0) * E * W[i] * up[i] - Adiag[i]) / M[i]);
        while (tau * lam_est >= 2.0) tau *= 0.5;

        Eigen::VectorXd trial;
        double E_trial = 0.0;
        while (true) {
            if (tau != factored_tau) {
                solver.factorize(Msp + tau * A);
                if (solver.info() != Eigen::Success)
                    throw InternalConsistencyError(kModule, "factorization of M + tau A failed");
                factored_tau = tau;
            }
            const Eigen::VectorXd rhs = M.cwiseProduct(u) + tau * E * W.cwiseProduct(up.cwiseProduct(u));
            trial = solver.solve(rhs).cwiseMax(0.0);
            normalize(F, trial);
            E_trial = F.energy(trial);
            if (E_trial <= E * (1.0 + 1e-13)) break;
            tau *= 0.5;
            accepted_streak = 0;
            if (tau < 1e-16 * opts.step) {
                finish(it, false);
                throw MinimizeConvergenceError("step size collapsed without energy decrease", res);
            }
        }
        const double change = std::abs(E - E_trial) / E_trial;
        u = std::move(trial);
        E = E_trial;
        res.history.push_back({it, E, std::abs(F.constraint(u) - 1.0), tau});
        if (change < opts.tol) {
            finish(it, true);
            return res;
        }
        if (++accepted_streak >= 3) {
            tau = std::min(4.0 * tau, opts.max_step);
            accepted_streak = 0;
        }
    }
    finish(opts.max_iters, false);
    std::ostringstream os;
    os << "no convergence after " << opts.max_iters << " iterations (energy " << E << ")";
    throw MinimizeConvergenceError(os.str(), res);
}

double recover_constant(double E_min) {
    if (!(E_min > 0.0) || !std::isfinite(E_min))
        throw InternalConsistencyError(kModule, "minimal energy must be positive to recover K");
    return 1.0 / std::sqrt(E_min);
}

double recover_constant(const MinimizeResult& result) { return recover_constant(result.E_min); }

ExtremalFit fit_extremal(const CylGrid& grid, double lambda_lo, double lambda_hi) {
    if (!(0.0 < lambda_lo && lambda_lo < lambda_hi)) throw DomainError(kModule, "invalid lambda bracket");
    double norm_u = 0.0;
    for (double v : grid.values) norm_u += v * v;
    if (!(norm_u > 0.0)) throw DomainError(kModule, "cannot fit a zero field");
    const std::size_t nr = grid.n_r();
    const bool r_edge = grid.has_r();

    auto eval = [&](double log_lambda, double* amp) {
        const ExtremalProfile v(ExtremalParams{grid.n, grid.k, std::exp(log_lambda), {}}, 1.0);
        double uv = 0.0, vv = 0.0;
        std::vector<double> vals(grid.values.size());
        for (std::size_t i = 0; i < grid.n_rho(); ++i)
            for (std::size_t j = 0; j < nr; ++j) {
                // the outer edge carries the Dirichlet zero of the truncated problem
                const bool edge = i + 1 == grid.n_rho() || (r_edge && j + 1 == nr);
                const double x = edge ? 0.0 : v(grid.rho[i], grid.r_at(j));
                vals[i * nr + j] = x;
                uv += x * grid.values[i * nr + j];
                vv += x * x;
            }
        const double c = uv / vv;
        double err = 0.0;
        for (std::size_t m = 0; m < vals.size(); ++m) {
            const double d = grid.values[m] - c * vals[m];
            err += d * d;
        }
        if (amp) *amp = c;
        return std::sqrt(err / norm_u);
    };

    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(lambda_lo), hi = std::log(lambda_hi);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = eval(x1, nullptr), f2 = eval(x2, nullptr);
    while (hi - lo > 1e-9) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = eval(x1, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = eval(x2, nullptr);
        }
    }
    ExtremalFit fit{};
    const double best = 0.5 * (lo + hi);
    fit.relative_error = eval(best, &fit.amplitude);
    fit.lambda = std::exp(best);
    return fit;
}

double domain_truncation_estimate(int n, double amplitude, double R) {
    if (n < 3 || !(R > 0.0)) throw DomainError(kModule, "truncation estimate requires n >= 3 and R > 0");
    return (n - 2) * sphere_measure(n) * amplitude * amplitude * std::pow(R, 2 - n);
}

} // namespace hsx
