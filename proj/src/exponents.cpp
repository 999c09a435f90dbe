#include "hsx/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsx/errors.hpp"

namespace hsx {

namespace {

const char* const kModule = "exponents";

void require_pair(double p, double s, int n) {
    if (!(std::isfinite(p) && std::isfinite(s)) || !(1.0 < p && p < n) || !(0.0 <= s && s <= p)) {
        std::ostringstream os;
        os << "require 1 < p < n and 0 <= s <= p, got n=" << n << " p=" << p << " s=" << s;
        throw DomainError(kModule, os.str());
    }
}

} // namespace

double ExtendedExponent::value() const {
    if (infinite_) throw DomainError(kModule, "exponent is +inf");
    return value_;
}

double hs_conjugate(double p, double s, int n) {
    require_pair(p, s, n);
    return p * (n - s) / (n - p);
}

CriticalPair critical_pair(double p, double s, int n) {
    require_pair(p, s, n);
    const double r = n / (n - p + s);
    const double p_star = hs_conjugate(p, 0.0, n);
    const double gap = hs_conjugate(p, s, n) - p;
    // p*(s) - p = p(p-s)/(n-p) vanishes exactly when s = p.
    if (std::abs(p - s) <= kExponentRelTol * p) return {1.0, ExtendedExponent::infinite()};
    return {r, ExtendedExponent::finite(p_star / gap)};
}

bool admissible(const ExponentContext& c) {
    if (c.n < 3 || c.k < 2 || c.k > c.n) return false;
    if (!(std::isfinite(c.p) && std::isfinite(c.s))) return false;
    if (!(1.0 < c.p && c.p < c.n)) return false;
    if (!(0.0 <= c.s && c.s <= c.p)) return false;
    if (!(c.s < c.k)) return false;
    return c.s * (c.n - c.k) < c.k * (c.n - c.p);
}

double ExponentReport::kappa(double t) const {
    const double upper = std::min(ctx.p, ctx.s);
    if (!(0.0 <= t && t < upper)) {
        std::ostringstream os;
        os << "kappa(t) requires 0 <= t < min(p, s) = " << upper << ", got t=" << t;
        throw DomainError(kModule, os.str());
    }
    return hs_conjugate(ctx.p, t, ctx.n) / ctx.p;
}

ExponentReport aux_exponents(const ExponentContext& ctx) {
    if (!admissible(ctx)) {
        std::ostringstream os;
        os << "inadmissible context n=" << ctx.n << " k=" << ctx.k << " p=" << ctx.p << " s=" << ctx.s;
        throw DomainError(kModule, os.str());
    }
    const double n = ctx.n, p = ctx.p, s = ctx.s;
    ExponentReport rep;
    rep.ctx = ctx;
    rep.p_star_s = hs_conjugate(p, s, ctx.n);
    rep.p_prime = p / (p - 1.0);
    const auto pair = critical_pair(p, s, ctx.n);
    rep.r = pair.r;
    rep.r_prime = pair.r_prime;
    rep.sigma = s * (n - p) / (2.0 * p * (n - s));
    rep.p_sigma = (n - p) / (p * (n - s));
    rep.decay_bound = (n - p) / (p - 1.0);
    return rep;
}

MassWindow galaxy_mass_window(double gamma) {
    if (!(0.0 < gamma && gamma < 2.0))
        throw DomainError(kModule, "galaxy window requires 0 < gamma < 2");
    return {hs_conjugate(2.0, gamma, 3), 6.0};
}

} // namespace hsx
