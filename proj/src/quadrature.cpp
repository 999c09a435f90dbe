#include "hsx/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "hsx/special_fn.hpp"

namespace hsx {

namespace {

const char* const kModule = "quadrature";
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980465050, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the nodes kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Counter {
    std::int64_t count = 0;
    std::int64_t budget = kDefaultEvalBudget;
};

struct Segment {
    Integrand1D f;
    double a;
    double b;
};

struct Panel {
    std::size_t seg;
    double a, b;
    double value, error, abs_value;
    bool operator<(const Panel& o) const { return error < o.error; }
};

double checked(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite integrand");
    return v;
}

Panel gk21(const Segment& sg, std::size_t idx, double a, double b, Counter& ctr) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = checked(sg.f(c));
    double f1[10], f2[10];
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = checked(sg.f(c - dx));
        f2[j] = checked(sg.f(c + dx));
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    ctr.count += 21;
    // QUADPACK's error scaling: |K - G| sharpened by the spread of f about its mean.
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * kEps * resabs);
    return {idx, a, b, resk * h, err, resabs};
}

QuadratureResult adaptive(const std::vector<Segment>& segs, double tol, Counter& ctr) {
    const std::int64_t start = ctr.count;
    std::priority_queue<Panel> queue;
    double total = 0.0, total_err = 0.0, total_abs = 0.0, frozen_err = 0.0;
    QuadratureResult best{0.0, std::numeric_limits<double>::infinity(), 0};

    auto fail = [&](const std::string& why) {
        best.evaluations = ctr.count - start;
        if (!std::isfinite(best.error_estimate)) best = {total, total_err, ctr.count - start};
        throw QuadratureConvergenceError(why, best);
    };

    try {
        for (std::size_t i = 0; i < segs.size(); ++i) {
            Panel p = gk21(segs[i], i, segs[i].a, segs[i].b, ctr);
            total += p.value;
            total_err += p.error;
            total_abs += p.abs_value;
            queue.push(p);
        }
        while (true) {
            if (total_err < best.error_estimate) best = {total, total_err, 0};
            const double roundoff = 1e3 * kEps * total_abs;
            if (total_err <= tol * std::abs(total) || total_err <= roundoff) {
                best.evaluations = ctr.count - start;
                return best;
            }
            if (queue.empty()) fail("subdivision reached floating-point resolution");
            if (ctr.count + 42 > ctr.budget) {
                std::ostringstream os;
                os << "evaluation budget " << ctr.budget << " exhausted (value " << total
                   << ", error " << total_err << ")";
                fail(os.str());
            }
            const Panel worst = queue.top();
            queue.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            if (!(worst.a < mid && mid < worst.b) ||
                (worst.b - worst.a) <= 8 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
                // Too narrow to split; its error is final.
                frozen_err += worst.error;
                if (frozen_err > tol * std::abs(total) && frozen_err > roundoff)
                    fail("subdivision reached floating-point resolution");
                continue;
            }
            const Panel left = gk21(segs[worst.seg], worst.seg, worst.a, mid, ctr);
            const Panel right = gk21(segs[worst.seg], worst.seg, mid, worst.b, ctr);
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            total_abs += left.abs_value + right.abs_value - worst.abs_value;
            total_err = std::max(total_err, 0.0);
            queue.push(left);
            queue.push(right);
        }
    } catch (const std::domain_error&) {
        fail("integrand is not finite (divergent integral?)");
    }
    return best;  // unreachable
}

// Segments covering [a, b]; b may be +inf. On a semi-infinite range the
// length L sets where the map puts its midpoint.
std::vector<Segment> make_segments(const Integrand1D& f, double a, double b, double L = 1.0) {
    if (std::isfinite(b)) return {Segment{f, a, b}};
    // x = a + L t/(1-t): t on [0, 1/2], and u = 1 - t on (0, 1/2] for x >= a + L.
    Integrand1D near = [f, a, L](double t) {
        const double om = 1.0 - t;
        const double fx = f(a + L * t / om);
        return fx == 0.0 ? 0.0 : L * fx / (om * om);
    };
    Integrand1D far = [f, a, L](double u) {
        const double fx = f(a + L * (1.0 - u) / u);
        return fx == 0.0 ? 0.0 : L * ((fx / u) / u);
    };
    return {Segment{near, 0.0, 0.5}, Segment{far, 0.0, 0.5}};
}

QuadratureResult integrate_with(const Integrand1D& f, double a, double b, double tol,
                                Counter& ctr, double L = 1.0) {
    if (!(tol > 0.0)) throw DomainError(kModule, "tolerance must be positive");
    if (!(a <= b) || std::isnan(a) || !std::isfinite(a))
        throw DomainError(kModule, "integration range must satisfy finite a <= b");
    if (a == b) return {0.0, 0.0, 0};
    return adaptive(make_segments(f, a, b, L), tol, ctr);
}

} // namespace

QuadratureResult integrate_interval(const Integrand1D& f, double a, double b, double tol,
                                    std::int64_t budget) {
    Counter ctr{0, budget};
    return integrate_with(f, a, b, tol, ctr);
}

QuadratureResult integrate_radial(const Integrand1D& g, int k, double s, double tol,
                                  std::int64_t budget) {
    if (k < 1 || !(0.0 <= s && s < k))
        throw DomainError(kModule, "integrate_radial requires k >= 1 and 0 <= s < k");
    const double e = k - 1 - s;
    const double sk = sphere_measure(k);
    Counter ctr{0, budget};
    Integrand1D h = [&g, e](double rho) { return g(rho) * std::pow(rho, e); };
    QuadratureResult res = integrate_with(h, 0.0, std::numeric_limits<double>::infinity(), tol, ctr);
    res.value *= sk;
    res.error_estimate *= sk;
    return res;
}

QuadratureResult integrate_cylindrical(const Integrand2D& f, int n, int k, double s,
                                       const CylindricalDomain& domain, double tol,
                                       std::int64_t budget) {
    if (n < 2 || k < 1 || k > n || !(0.0 <= s && s < k))
        throw DomainError(kModule, "integrate_cylindrical requires 1 <= k <= n and 0 <= s < k");
    if (!(domain.rho_max > 0.0)) throw DomainError(kModule, "rho_max must be positive");
    const double e_rho = k - 1 - s;
    Counter ctr{0, budget};

    if (k == n) {
        if (domain.r_max)
            throw DomainError(kModule, "domain degeneracy: k = n has no r dimension but r_max was given");
        Integrand1D h = [&f, e_rho](double rho) { return f(rho, 0.0) * std::pow(rho, e_rho); };
        QuadratureResult res = integrate_with(h, 0.0, domain.rho_max, tol, ctr);
        const double sk = sphere_measure(k);
        res.value *= sk;
        res.error_estimate *= sk;
        return res;
    }

    const double r_max = domain.r_max.value_or(std::numeric_limits<double>::infinity());
    if (!(r_max > 0.0)) throw DomainError(kModule, "r_max must be positive");
    const int e_r = n - k - 1;
    const double inner_tol = 0.1 * tol;
    double worst_inner_rel = 0.0;

    Integrand1D outer = [&](double rho) {
        Integrand1D inner = [&f, rho, e_r](double r) {
            return e_r == 0 ? f(rho, r) : f(rho, r) * std::pow(r, e_r);
        };
        const QuadratureResult in = integrate_with(inner, 0.0, r_max, inner_tol, ctr, std::max(1.0, rho));
        if (in.value != 0.0)
            worst_inner_rel = std::max(worst_inner_rel, in.error_estimate / std::abs(in.value));
        return in.value * std::pow(rho, e_rho);
    };
    QuadratureResult res = integrate_with(outer, 0.0, domain.rho_max, 0.5 * tol, ctr);
    const double scale = sphere_measure(k) * sphere_measure(n - k);
    res.error_estimate = scale * (res.error_estimate + std::abs(res.value) * worst_inner_rel);
    res.value *= scale;
    res.evaluations = ctr.count;
    return res;
}

namespace {

// f(x, x - c) with the offset passed separately so that callers can form
// differences near c without cancellation.
using OffsetIntegrand = std::function<double(double, double)>;

// integral of f over [c, d] (either order) with nodes clustered geometrically
// toward c: x = c + (d - c) e^{-v}, v >= 0. Suited to log-type singularities at c.
double integrate_toward(const OffsetIntegrand& f, double c, double d, double tol, Counter& ctr) {
    const double len = std::abs(d - c);
    if (len == 0.0) return 0.0;
    Integrand1D g = [&f, c, d, len](double v) {
        const double e = std::exp(-v);
        const double off = (d - c) * e;
        return e == 0.0 ? 0.0 : f(c + off, off) * len * e;
    };
    return integrate_with(g, 0.0, std::numeric_limits<double>::infinity(), tol, ctr, 4.0).value;
}

// integral over [a, b] split at c, clustering toward c from both sides.
double integrate_across(const OffsetIntegrand& f, double a, double c, double b, double tol, Counter& ctr) {
    return integrate_toward(f, c, a, tol, ctr) + integrate_toward(f, c, b, tol, ctr);
}

} // namespace

QuadratureResult singular_newtonian_integral(std::span<const double> z, int n, int k, double s,
                                             double tol, std::int64_t budget) {
    if (static_cast<int>(z.size()) != n)
        throw DomainError(kModule, "point dimension does not match n");
    if (n < 3 || k < 2 || k > n || !(0.0 <= s && s < k && s < 2.0))
        throw DomainError(kModule,
                          "singular_newtonian_integral requires n >= 3, 2 <= k <= n, 0 <= s < min(k, 2)");
    if (!(tol > 0.0)) throw DomainError(kModule, "tolerance must be positive");
    double x2 = 0.0, z2 = 0.0;
    for (int i = 0; i < n; ++i) {
        z2 += z[i] * z[i];
        if (i < k) x2 += z[i] * z[i];
    }
    if (!(z2 > 0.0)) throw DomainError(kModule, "z must be nonzero");
    const double xn = std::sqrt(x2);
    const double radius = 0.5 * std::sqrt(z2);
    const double pi = std::numbers::pi;
    Counter ctr{0, budget};

    // Spherical coordinates about z: zeta = z + t*omega, with omega split as
    // (sin(phi) theta, cos(phi) chi) and theta at polar angle psi from x.
    // The kernel |z - zeta|^{2-n} t^{n-1} dt reduces to t dt, and with
    // u = pi - psi, ts = t sin(phi), gap = ts - |x|,
    //   |xi|^2 = gap^2 + 4 ts |x| sin^2(u/2).
    // For small gap the weight peaks at u = 0 with width |gap| / sqrt(ts |x|);
    // u = 2 asin(|gap| sinh(v) / (2g)) flattens it.
    auto sphere_mean = [&](double ts, double gap) {
        const double g = std::sqrt(ts * xn);
        const double e = std::max(std::abs(gap), 1e-300 * (ts + xn));
        if (k == 2 && s == 1.0) {
            // complete elliptic integral of the first kind: pi / AGM(ts + |x|, |gap|)
            double a = ts + xn, b = e;
            while (a - b > 4 * kEps * a) {
                const double m = 0.5 * (a + b);
                b = std::sqrt(a * b);
                a = m;
            }
            return pi / (0.5 * (a + b));
        }
        auto weight = [k](double u) { return k == 2 ? 1.0 : std::pow(std::sin(u), k - 2); };
        Integrand1D far = [&](double u) {
            const double c = std::sin(0.5 * u);
            return s == 0.0 ? weight(u) : weight(u) * std::pow(gap * gap + 4.0 * ts * xn * c * c, -0.5 * s);
        };
        if (s == 0.0 || g == 0.0) return integrate_with(far, 0.0, pi, 0.01 * tol, ctr).value;
        Integrand1D near = [&](double v) {
            const double u = 2.0 * std::asin(std::min(1.0, e * std::sinh(v) / (2.0 * g)));
            return weight(u) * std::pow(e * std::cosh(v), 1.0 - s) / (g * std::cos(0.5 * u));
        };
        const double v_max = std::asinh(2.0 * g * std::sin(0.25 * pi) / e);
        return integrate_with(near, 0.0, v_max, 0.01 * tol, ctr).value +
               integrate_with(far, 0.5 * pi, pi, 0.01 * tol, ctr).value;
    };

    // Where the sphere of radius t crosses x = 0 (t sin(phi) = |x|) the inner
    // integral is log-singular in phi, and in t at t = |x|. dt = t - |x|.
    const bool singular_weight = s > 0.0 && xn > 0.0;
    OffsetIntegrand over_t;
    double angular_const = sphere_measure(k - 1);
    if (k == n) {
        over_t = [&](double t, double dt) { return t * sphere_mean(t, dt); };
    } else {
        angular_const *= sphere_measure(n - k);
        auto phi_weight = [n, k](double phi) {
            const double w = std::pow(std::sin(phi), k - 1);
            return n - k - 1 == 0 ? w : w * std::pow(std::cos(phi), n - k - 1);
        };
        over_t = [&](double t, double dt) {
            if (singular_weight && dt > 0.0) {
                const double cut = std::asin(xn / t);
                // t sin(cut + w) - |x| = 2 t cos(cut + w/2) sin(w/2)
                OffsetIntegrand over_phi = [&, t, cut](double phi, double w) {
                    const double gap = 2.0 * t * std::cos(cut + 0.5 * w) * std::sin(0.5 * w);
                    return phi_weight(phi) * sphere_mean(t * std::sin(phi), gap);
                };
                return t * integrate_across(over_phi, 0.0, cut, 0.5 * pi, 0.1 * tol, ctr);
            }
            Integrand1D over_phi = [&, t, dt](double phi) {
                const double h = std::sin(0.5 * (0.5 * pi - phi));
                const double w = phi_weight(phi);
                return w == 0.0 ? 0.0 : w * sphere_mean(t * std::sin(phi), dt - 2.0 * t * h * h);
            };
            return t * integrate_with(over_phi, 0.0, 0.5 * pi, 0.1 * tol, ctr).value;
        };
    }
    QuadratureResult res;
    if (singular_weight && xn < radius) {
        res.value = integrate_across(over_t, 0.0, xn, radius, 0.5 * tol, ctr);
        res.error_estimate = 0.5 * tol * std::abs(res.value);
    } else {
        res = integrate_with([&](double t) { return over_t(t, t - xn); }, 0.0, radius, 0.5 * tol, ctr);
    }
    res.error_estimate = angular_const * (res.error_estimate + 0.11 * tol * std::abs(res.value));
    res.value *= angular_const;
    res.evaluations = ctr.count;
    return res;
}

} // namespace hsx
