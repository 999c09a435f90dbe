#pragma once

// Constrained minimization of the Dirichlet energy
//   E(u) = integral |grad u|^2
// subject to N(u) = integral |x|^{-s} u^q = 1, q = 2(n-s)/(n-2), over
// cylindrically symmetric u(rho, r) on a truncated graded grid with u = 0 on
// the outer edges.
//
// Discretization: u is piecewise linear in each direction. Face terms
// (U_{i+1} - U_i)^2 / h_i^2 are integrated exactly against rho^a on the face and
// with moment weights in the other direction, so E_h = U^T A U with A sparse
// SPD. N_h = sum W U^q and the lumped mass M use the same moment weights.
//
// Flow: with E = E_h(U) and N_h(U) = 1, the constrained gradient of E_h/N_h^{2/q}
// in the M inner product is d = M^{-1}(-A U + E W U^{q-1}). The step is taken
// semi-implicitly,
//   (M + tau A) U* = M U + tau E W U^{q-1},
// then clamped at 0 and rescaled so that N_h = 1. M + tau A is an M-matrix, so a
// positive state stays positive.

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "hsx/cylinder_grid.hpp"
#include "hsx/errors.hpp"

namespace hsx {

struct GridSpec {
    double rho_max = 64.0;
    double r_max = 64.0;
    int n_rho = 128;
    int n_r = 128;
    double grading = 2.0;
};

enum class InitMode { positive_bump, analytic_extremal, user_grid };

struct MinimizeOptions {
    double step = 1.0;      ///< initial pseudo-time step tau
    int max_iters = 2000;
    double tol = 1e-11;     ///< relative change of the quotient between accepted steps
    InitMode init = InitMode::positive_bump;
    double init_width = 1.0;   ///< bump (1 + |z|^2/w^2)^{-(n-2)/2}
    double init_lambda = 1.0;  ///< dilation of the analytic extremal
    std::optional<CylGrid> user_grid;  ///< interpolated onto the grid
    double max_step = 1e12;
};

struct HistoryEntry {
    int iteration;
    double energy;
    double constraint_defect;
    double step;
};

struct MinimizeResult {
    int n = 0;
    int k = 0;
    double s = 0;
    double E_min = 0;
    double K_est = 0;
    CylGrid grid;
    std::vector<HistoryEntry> history;
    int iterations = 0;
    bool converged = false;
};

/// Raised when max_iters is exhausted or the step collapses. Carries the last state.
class MinimizeConvergenceError : public ConvergenceError {
public:
    MinimizeConvergenceError(const std::string& what, MinimizeResult partial)
        : ConvergenceError("minimizer", what), partial_(std::move(partial)) {}
    const MinimizeResult& partial() const noexcept { return partial_; }

private:
    MinimizeResult partial_;
};

/// The discrete functional on a fixed grid layout. Vectors hold the interior
/// unknowns (outer edge nodes excluded) in row-major order.
class RayleighFunctional {
public:
    RayleighFunctional(const CylGrid& layout, double s);

    Eigen::Index size() const { return static_cast<Eigen::Index>(mass_.size()); }
    double exponent() const { return q_; }

    Eigen::VectorXd pack(const CylGrid& grid) const;
    CylGrid unpack(const Eigen::VectorXd& u) const;

    double energy(const Eigen::VectorXd& u) const;
    double constraint(const Eigen::VectorXd& u) const;
    double quotient(const Eigen::VectorXd& u) const;
    /// Euclidean gradient of quotient().
    Eigen::VectorXd quotient_gradient(const Eigen::VectorXd& u) const;
    /// M^{-1}(-A u + (E/N) W u^{q-1}); a positive multiple of -M^{-1} grad quotient.
    Eigen::VectorXd flow_direction(const Eigen::VectorXd& u) const;

    const Eigen::SparseMatrix<double>& stiffness() const { return A_; }
    const Eigen::VectorXd& mass() const { return mass_; }
    const Eigen::VectorXd& constraint_weights() const { return W_; }

private:
    CylGrid layout_;
    std::size_t ni_, nj_;
    double q_;
    Eigen::SparseMatrix<double> A_;
    Eigen::VectorXd mass_;
    Eigen::VectorXd W_;
};

MinimizeResult minimize_rayleigh(int n, int k, double s, const GridSpec& grid_spec,
                                 const MinimizeOptions& opts = {});

/// E_min^{-1/2}. InternalConsistencyError unless E_min > 0.
double recover_constant(double E_min);
double recover_constant(const MinimizeResult& result);

/// Best fit of c * ExtremalProfile(lambda) to a grid, by golden-section search
/// in log(lambda) with the amplitude solved in closed form. Error is the
/// relative l2 norm over nodes.
struct ExtremalFit {
    double lambda;
    double amplitude;
    double relative_error;
};
ExtremalFit fit_extremal(const CylGrid& grid, double lambda_lo = 0.02, double lambda_hi = 50.0);

/// Energy of the extremal tail outside radius R: (n-2) sigma_n A^2 R^{2-n} for
/// u ~ A |z|^{2-n}. A first-order estimate of the Dirichlet truncation bias.
double domain_truncation_estimate(int n, double amplitude, double R);

} // namespace hsx
