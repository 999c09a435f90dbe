#pragma once

// Exponent calculus for the Hardy-Sobolev inequality with a singular weight
// |x|^{-s} on the first k coordinates of R^n = R^k x R^{n-k}.

#include <limits>

namespace hsx {

/// Relative tolerance used for every equality test on exponents.
inline constexpr double kExponentRelTol = 1e-12;

/// The parameter quadruple (n, k, p, s).
struct ExponentContext {
    int n = 3;
    int k = 2;
    double p = 2.0;
    double s = 1.0;
};

/// An exponent in [1, +inf]. The infinite value is carried as a tag, never as
/// a floating-point overflow.
class ExtendedExponent {
public:
    static ExtendedExponent finite(double v) { return ExtendedExponent(false, v); }
    static ExtendedExponent infinite() {
        return ExtendedExponent(true, std::numeric_limits<double>::infinity());
    }

    bool is_infinite() const noexcept { return infinite_; }
    /// Throws DomainError when infinite.
    double value() const;
    /// 1/value, with 1/inf = 0.
    double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

private:
    ExtendedExponent(bool inf, double v) : infinite_(inf), value_(v) {}
    bool infinite_;
    double value_;
};

/// p*(s) = p(n-s)/(n-p). Requires 1 < p < n and 0 <= s <= p.
double hs_conjugate(double p, double s, int n);

struct CriticalPair {
    double r;
    ExtendedExponent r_prime;
};

/// r = n/(n-p+s) and its Holder conjugate r' = p*/(p*(s)-p); r' is infinite at s = p.
CriticalPair critical_pair(double p, double s, int n);

/// True iff 1<p<n, 0<=s<=p, s<k and s(n-k) < k(n-p), with 3 <= n and 2 <= k <= n.
bool admissible(const ExponentContext& ctx);

/// Every derived exponent of an admissible context.
struct ExponentReport {
    ExponentContext ctx;
    double p_star_s = 0;  ///< Hardy-Sobolev conjugate p*(s)
    double p_prime = 0;   ///< Holder conjugate p/(p-1)
    double r = 0;
    ExtendedExponent r_prime = ExtendedExponent::infinite();
    double sigma = 0;        ///< s(n-p) / (2p(n-s))
    double p_sigma = 0;      ///< (n-p) / (p(n-s))
    double decay_bound = 0;  ///< (n-p)/(p-1), decay rate of the p-Laplace fundamental solution

    /// kappa(t) = p*(t)/p for 0 <= t < min(p, s). Throws DomainError outside.
    double kappa(double t) const;
};

ExponentReport aux_exponents(const ExponentContext& ctx);

/// Exponent window (2*(gamma), 6) in R^3 on which finite energy solutions of
/// the elliptic galaxy model have finite mass.
struct MassWindow {
    double low;
    double high;
    bool contains(double q) const noexcept { return low < q && q < high; }
};

MassWindow galaxy_mass_window(double gamma);

} // namespace hsx
