#pragma once

// Closed-form objects of the s = 1, p = 2 Hardy-Sobolev problem on
// R^n = R^k x R^{n-k}: Beta-function integrals, the extremal family and the
// sharp constant, the explicit two-parameter families in cylindrical
// coordinates, the Newtonian fundamental solution and the Kelvin transform.

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hsx {

/// integral over R^n of (1 + |x|^2 + |y|^2)^{-m} |x|^{-s}, x in R^k.
/// Requires 0 <= s < k < n and m > (n - s)/2; otherwise DivergentIntegralError.
double beta_integral_full(int n, int k, double m, double s);

/// integral over R^k of (1 + |x|^2)^{-a} |x|^{-s}. Requires 0 <= s < k and a > (k - s)/2.
double beta_integral_radial(int k, double a, double s);

/// Best constant of ||u||_{q,|x|^{-1}} <= K ||grad u||_2, q = 2(n-1)/(n-2).
///
/// The extremal v = c [(|x|+p)^2 + |y|^2]^{-(n-2)/2}, p = (n-2)/(4a), solves
/// Delta v = -(Lambda/|x|) v^{n/(n-2)} with c = ((n-2)/2)^{n-2} Lambda^{-(n-2)/2}.
/// Imposing the constraint N(v) = 1 gives
///   Lambda^{n-1} = ((n-2)/2)^{2(n-1)} J,  J = integral |x|^{-1} [(|x|+p)^2+|y|^2]^{-(n-1)},
/// and then ||grad v||_2^2 = Lambda, so K = Lambda^{-1/2}.
///
/// K_literal solves K^{2(n-1)^2/(n-2)} = ((n-2)/2)^{2(n-1)} J literally, i.e. the
/// exponent convention Lambda = K^{2(n-1)/(n-2)}. It is not the best constant;
/// K_literal = K^{-(n-2)/(n-1)}. K_printed and K_printed_simplified evaluate the
/// two printed closed forms for the same equation, which contain a wrong power
/// of p and a wrong Beta argument; they are kept only to report the discrepancy.
struct SharpConstant {
    int n = 0;
    int k = 0;
    double K = 0;       ///< Lambda^{-1/2}; the best constant
    double Lambda = 0;  ///< minimal Dirichlet energy under N(u) = 1
    double mu = 0;      ///< 4 Lambda / (n-2)^2
    double p_shift = 0; ///< (n-2)/(4a), a = k-1

    double J = 0;             ///< normalization integral by quadrature
    double J_error = 0;       ///< its absolute error estimate
    double J_closed = 0;      ///< Beta-function closed form of J
    double K_literal = 0;     ///< Lambda^{(n-2)/(2(n-1))}
    std::optional<double> K_printed;             ///< printed first line, absent for k = n
    std::optional<double> K_printed_simplified;  ///< printed second line, absent for k = n

    /// |X - K| / K.
    double discrepancy(double other) const;
};

/// Throws DomainError unless n >= 3 and 2 <= k <= n.
SharpConstant sharp_constant_K(int n, int k, double tol = 1e-12);

/// J(p) = sigma_k B(k-1, n-1) p^{-(n-1)} times (sigma_{n-k}/2) B((n-k)/2, (n+k)/2 - 1) when k < n.
double normalization_integral_closed(int n, int k, double p);

struct ExtremalParams {
    int n = 3;
    int k = 2;
    double lambda = 1.0;
    std::vector<double> y0;  ///< n - k coordinates; empty means the origin

    int a() const { return k - 1; }
};

/// Which constant fixes the amplitude of the extremal.
///  normalized: Lambda = constant.Lambda, so that N(v) = 1.
///  printed:    Lambda = K^{2(n-1)/(n-2)}, giving the prefactor K^{-(n-1)}.
enum class ExtremalConvention { normalized, printed };

/// Amplitude lambda^{-(n-2)} ((n-2)/2)^{n-2} Lambda^{-(n-2)/2}.
double extremal_prefactor(const ExtremalParams& params, double Lambda);

/// Lambda for the chosen convention.
double extremal_lambda(const SharpConstant& constant, ExtremalConvention conv);

/// v at (|x|, y) with Lambda from the convention.
double extremal_v(const ExtremalParams& params, const SharpConstant& constant, double x_norm,
                  std::span<const double> y,
                  ExtremalConvention conv = ExtremalConvention::normalized);

/// Cylindrical profile with y0 = 0: v(rho, r) for explicit Lambda.
/// prefactor * [(rho + (n-2)/(4 a lambda^2))^2 + r^2]^{-(n-2)/2}.
class ExtremalProfile {
public:
    ExtremalProfile(const ExtremalParams& params, double Lambda);
    double operator()(double rho, double r) const;
    double prefactor() const { return prefactor_; }
    double shift() const { return shift_; }
    double Lambda() const { return Lambda_; }

private:
    int n_;
    double Lambda_;
    double prefactor_;
    double shift_;
};

struct Prop4Params {
    int a = 1;
    int b = 1;
    double lambda = 1.0;
    double alpha = 0.0;
    double beta = 0.0;

    int n() const { return a + b + 2; }
    double p_coef() const { return alpha * (n() - 2) * lambda * lambda * a; }
    double q_coef() const { return beta * (n() - 2) * lambda * lambda * b; }
};

struct Prop4Value {
    double value;
    double p_coef;
    double q_coef;
};

/// lambda^{2-n} ((|x| + alpha)^2 + (|y| + beta)^2)^{(2-n)/2}, which solves
/// Delta v = -v^{n/(n-2)} (p/|x| + q/|y|) away from the subspaces.
Prop4Value prop4_solution(const Prop4Params& params, std::span<const double> x,
                          std::span<const double> y);

/// Same, in terms of rho = |x|, r = |y|. SingularityError at the pole.
double prop4_value(const Prop4Params& params, double rho, double r);

/// phi = lambda^2 ((rho + alpha)^2 + (r + beta)^2).
double prop41_phi(const Prop4Params& params, double rho, double r);

/// (1 / (n (n-2) omega_n)) |z|^{2-n}.
double fundamental_solution(int n, double z_norm);

using PointFunction = std::function<double(std::span<const double>)>;

/// (Ku)(z) = |z|^{2-n} u(z/|z|^2). The returned function throws
/// SingularityError at z = 0 and DomainError on a dimension mismatch.
PointFunction kelvin_transform(PointFunction u, int n);

} // namespace hsx
