#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hsx/asymptotics.hpp"
#include "hsx/cli.hpp"
#include "hsx/closed_forms.hpp"
#include "hsx/cylinder_grid.hpp"
#include "hsx/exponents.hpp"
#include "hsx/minimizer.hpp"
#include "hsx/quadrature.hpp"
#include "hsx/special_fn.hpp"
#include "json.hpp"
#include "svg_plot.hpp"

namespace hsx::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Summary {
public:
    void add(const std::string& key, double value, const std::string& units = "", const std::string& oracle = "") {
        entries_.push_back({{"key", key}, {"value", std::isfinite(value) ? json(value) : json(fmt17(value))},
                            {"units", units}, {"oracle", oracle}});
        text_.push_back({key, fmt17(value), units, oracle});
    }
    void add_text(const std::string& key, const std::string& value, const std::string& oracle = "") {
        entries_.push_back({{"key", key}, {"value", value}, {"units", ""}, {"oracle", oracle}});
        text_.push_back({key, value, "", oracle});
    }
    void add_bool(const std::string& key, bool value, const std::string& oracle = "") {
        entries_.push_back({{"key", key}, {"value", value}, {"units", ""}, {"oracle", oracle}});
        text_.push_back({key, value ? "true" : "false", "", oracle});
    }
    void write(const fs::path& dir, const RunConfig& cfg, std::ostream& out) const {
        json doc{{"subcommand", to_string(cfg.subcommand)}, {"entries", entries_}};
        std::ofstream f(dir / "summary.json");
        f << doc.dump(2) << "\n";
        for (const auto& t : text_) {
            out << t.key << " = " << t.value;
            if (!t.units.empty()) out << " " << t.units;
            if (!t.oracle.empty()) out << "  [" << t.oracle << "]";
            out << "\n";
        }
    }

private:
    struct Line {
        std::string key, value, units, oracle;
    };
    json entries_ = json::array();
    std::vector<Line> text_;
};

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(const std::vector<double>& values) { rows_.push_back(values); }
    void write(const fs::path& path) const {
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write " + path.string());
        for (std::size_t i = 0; i < header_.size(); ++i) f << (i ? "," : "") << header_[i];
        f << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << fmt17(r[i]);
            f << "\n";
        }
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

double rel_diff(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

void write_manifest(const fs::path& dir, const RunConfig& cfg) {
    json params = json::object();
    for (const auto& [k, v] : cfg.params) params[k] = v;
    json doc{{"program", "hsx"},
             {"subcommand", to_string(cfg.subcommand)},
             {"output_dir", cfg.output_dir},
             {"params", params}};
    std::ofstream f(dir / "manifest.json");
    f << doc.dump(2) << "\n";
}

// --- subcommands ---------------------------------------------------------

void run_exponents(const RunConfig& cfg, Summary& sum) {
    const ExponentContext ctx{cfg.get_int("n"), cfg.get_int("k"), cfg.get_real("p"), cfg.get_real("s")};
    sum.add_bool("admissible", admissible(ctx));
    const ExponentReport rep = aux_exponents(ctx);
    sum.add("p_star_s", rep.p_star_s, "", "p(n-s)/(n-p)");
    sum.add("p_prime", rep.p_prime);
    sum.add("r", rep.r);
    if (rep.r_prime.is_infinite())
        sum.add_text("r_prime", "inf");
    else
        sum.add("r_prime", rep.r_prime.value());
    sum.add("r_times_p_minus_p_star_rs", rep.r * ctx.p - hs_conjugate(ctx.p, rep.r * ctx.s, ctx.n), "",
            "identity rp = p*(rs)");
    sum.add("sigma", rep.sigma);
    sum.add("p_sigma", rep.p_sigma);
    sum.add("decay_bound", rep.decay_bound);
    if (std::min(ctx.p, ctx.s) > 0.0) sum.add("kappa_at_half_range", rep.kappa(0.5 * std::min(ctx.p, ctx.s)));
    const MassWindow w = galaxy_mass_window(cfg.get_real("gamma"));
    sum.add("mass_window_low", w.low);
    sum.add("mass_window_high", w.high);
    sum.add_bool("q_inside_window", w.contains(cfg.get_real("q")));
}

void run_quadrature(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const std::string id = cfg.get("identity");
    const int n = cfg.get_int("n"), k = cfg.get_int("k");
    const double s = cfg.get_real("s"), tol = cfg.get_real("tol");
    double closed = 0.0;
    QuadratureResult q;
    std::string oracle;
    if (id == "beta-full") {
        const double m = cfg.get_real("m");
        closed = beta_integral_full(n, k, m, s);
        q = integrate_cylindrical([m](double rho, double r) { return std::pow(1.0 + rho * rho + r * r, -m); }, n, k,
                                  s, {}, tol);
        oracle = "Beta closed form";
    } else if (id == "beta-radial") {
        const double a = cfg.get_real("a");
        closed = beta_integral_radial(k, a, s);
        q = integrate_radial([a](double rho) { return std::pow(1.0 + rho * rho, -a); }, k, s, tol);
        oracle = "Beta closed form";
    } else if (id == "normalization") {
        const SharpConstant c = sharp_constant_K(n, k, tol);
        closed = c.J_closed;
        q = {c.J, c.J_error, 0};
        oracle = "Beta closed form";
    } else {
        std::vector<double> z(n, 0.0);
        if (cfg.get("z").empty()) {
            z[0] = 1.0;
            z[n - 1] += 1.0;
        } else {
            std::stringstream ss(cfg.get("z"));
            std::string part;
            z.clear();
            while (std::getline(ss, part, ',')) {
                try {
                    z.push_back(std::stod(part));
                } catch (const std::exception&) {
                    throw UsageError("malformed value for --z: " + cfg.get("z"));
                }
            }
        }
        q = singular_newtonian_integral(z, n, k, s, tol);
        double z2 = 0.0;
        for (double v : z) z2 += v * v;
        if (s == 0.0) {
            const double R = 0.5 * std::sqrt(z2);
            closed = 0.5 * sphere_measure(n) * R * R;
            oracle = "sigma_n R^2/2";
        } else {
            std::vector<double> z2v(z);
            for (double& v : z2v) v *= 2.0;
            const QuadratureResult q2 = singular_newtonian_integral(z2v, n, k, s, tol);
            sum.add("I_2z_over_I_z", q2.value / q.value, "", "2^{2-s}");
            closed = q.value * std::pow(2.0, 2.0 - s) * q.value / q2.value;
            oracle = "homogeneity I(2z) = 2^{2-s} I(z)";
        }
    }
    const double rel = rel_diff(q.value, closed);
    sum.add_text("identity", id);
    sum.add("closed_form", closed, "", oracle);
    sum.add("quadrature", q.value);
    sum.add("error_estimate", q.error_estimate);
    sum.add("relative_error", rel);
    sum.add("evaluations", static_cast<double>(q.evaluations));
    CsvTable t({"n", "k", "s", "closed_form", "quadrature", "error_estimate", "relative_error"});
    t.row({double(n), double(k), s, closed, q.value, q.error_estimate, rel});
    t.write(dir / "comparison.csv");
}

void run_constant(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const SharpConstant c = sharp_constant_K(cfg.get_int("n"), cfg.get_int("k"), cfg.get_real("tol"));
    const std::string oracle = "quadrature of the normalization integral";
    sum.add("K", c.K, "", oracle);
    sum.add("Lambda", c.Lambda, "", "K^-2");
    sum.add("mu", c.mu, "", "4 Lambda/(n-2)^2");
    sum.add("p_shift", c.p_shift);
    sum.add("J_quadrature", c.J, "", oracle);
    sum.add("J_error_estimate", c.J_error);
    sum.add("J_closed_form", c.J_closed, "", "Beta closed form");
    sum.add("J_relative_difference", rel_diff(c.J, c.J_closed));
    sum.add("K_literal", c.K_literal, "", "K^{2(n-1)^2/(n-2)} = ((n-2)/2)^{2(n-1)} J");
    sum.add("K_literal_discrepancy", c.discrepancy(c.K_literal));
    CsvTable t({"route", "K", "relative_discrepancy"});
    t.row({0, c.K, 0.0});
    t.row({1, c.K_literal, c.discrepancy(c.K_literal)});
    if (c.K_printed) {
        sum.add("K_printed", *c.K_printed, "", "printed closed form, first line");
        sum.add("K_printed_discrepancy", c.discrepancy(*c.K_printed));
        sum.add("K_printed_vs_literal", rel_diff(*c.K_printed, c.K_literal));
        sum.add("K_printed_simplified", *c.K_printed_simplified, "", "printed closed form, second line");
        sum.add("K_printed_simplified_discrepancy", c.discrepancy(*c.K_printed_simplified));
        sum.add("K_printed_lines_disagreement", rel_diff(*c.K_printed_simplified, *c.K_printed));
        t.row({2, *c.K_printed, c.discrepancy(*c.K_printed)});
        t.row({3, *c.K_printed_simplified, c.discrepancy(*c.K_printed_simplified)});
    } else {
        sum.add_text("K_printed", "undefined for k = n");
    }
    t.write(dir / "constant_routes.csv");
}

void run_verify_extremal(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const int n = cfg.get_int("n"), k = cfg.get_int("k");
    const int levels = cfg.get_int("levels"), nodes = cfg.get_int("nodes");
    const double extent = cfg.get_real("extent"), grading = cfg.get_real("grading");
    if (levels < 2) throw UsageError("--levels must be at least 2");
    const SharpConstant c = sharp_constant_K(n, k);
    const ExtremalConvention conv =
        cfg.get("convention") == "printed" ? ExtremalConvention::printed : ExtremalConvention::normalized;
    const double Lambda = extremal_lambda(c, conv);
    const ExtremalParams ep{n, k, cfg.get_real("lambda"), {}};
    const ExtremalProfile v(ep, Lambda);

    CsvTable t({"nodes", "max_residual", "ratio"});
    double prev = 0.0, ratio = 0.0;
    for (int l = 0; l < levels; ++l) {
        const int N = nodes << l;
        const CylGrid g = sample(build_grid(n, k, extent, extent, N, N, grading), [&](double a, double b) { return v(a, b); });
        const double res = max_abs_interior(el_residual(g, Lambda, 1.0));
        ratio = l ? prev / res : 0.0;
        t.row({double(N), res, ratio});
        sum.add("max_residual_N" + std::to_string(N), res);
        prev = res;
    }
    t.write(dir / "el_residual.csv");
    sum.add("Lambda", Lambda, "", conv == ExtremalConvention::printed ? "K^{2(n-1)/(n-2)}" : "K^-2");
    sum.add("final_ratio", ratio, "", "4 for second order");
    sum.add("observed_order", std::log2(ratio));

    const double q = 2.0 * (n - 1) / (n - 2.0);
    const QuadratureResult N_v = integrate_cylindrical(
        [&](double rho, double r) { return std::pow(v(rho, r), q); }, n, k, 1.0, {}, 1e-10);
    sum.add("constraint_N_v", N_v.value, "", conv == ExtremalConvention::normalized ? "1" : "");
}

void run_verify_prop4(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    Prop4Params pp;
    pp.a = cfg.get_int("a");
    pp.b = cfg.get_int("b");
    pp.lambda = cfg.get_real("lambda");
    pp.alpha = cfg.get_real("alpha");
    pp.beta = cfg.get_real("beta");
    if (pp.a < 1 || pp.b < 1) throw UsageError("--a and --b must be positive");
    const int n = pp.n(), k = pp.a + 1;
    const double extent = cfg.get_real("extent");
    const int nodes = cfg.get_int("nodes"), levels = cfg.get_int("levels");

    const CylGrid phi = sample(build_grid(n, k, extent, extent, nodes, nodes, 1.0),
                               [&](double rho, double r) { return prop41_phi(pp, rho, r); });
    const double res41 = max_abs_interior(prop41_residual(phi, pp), 0);
    sum.add("n", n);
    sum.add("p_coef", pp.p_coef());
    sum.add("q_coef", pp.q_coef());
    sum.add("phi_residual_max", res41, "", "0 for the exact family");

    // v-form on a graded grid, away from a neighborhood of the origin where the
    // alpha = beta = 0 profile is singular. On a uniform grid the a/rho factor
    // turns the O(h^2) first-node derivative error into O(h).
    CsvTable t({"nodes", "v_residual_max", "ratio"});
    double prev = 0.0;
    for (int l = 0; l < levels; ++l) {
        const int N = nodes << l;
        const CylGrid vg = sample(build_grid(n, k, extent, extent, N, N, 2.0),
                                  [&](double rho, double r) { return prop4_value(pp, rho, r); });
        const CylGrid res = prop42_residual(vg, pp);
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < res.n_rho(); ++i)
            for (std::size_t j = 0; j + 1 < res.n_r(); ++j)
                if (std::hypot(res.rho[i], res.r[j]) >= 0.25 * extent) m = std::max(m, std::abs(res.at(i, j)));
        t.row({double(N), m, l ? prev / m : 0.0});
        if (l + 1 == levels) {
            sum.add("v_residual_max", m, "", "0 for the exact family");
            if (l > 0) sum.add("v_residual_ratio", prev / m, "", "4 for second order");
        }
        prev = m;
    }
    t.write(dir / "prop4_residual.csv");
}

void write_history(const MinimizeResult& r, const fs::path& path) {
    CsvTable t({"iteration", "energy", "constraint_defect", "step"});
    for (const auto& h : r.history) t.row({double(h.iteration), h.energy, h.constraint_defect, h.step});
    t.write(path);
}

void run_minimize(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const int n = cfg.get_int("n"), k = cfg.get_int("k");
    const double s = cfg.get_real("s");
    GridSpec gs{cfg.get_real("rho_max"), cfg.get_real("r_max"), cfg.get_int("n_rho"), cfg.get_int("n_r"),
                cfg.get_real("grading")};
    MinimizeOptions opts;
    opts.step = cfg.get_real("step");
    opts.max_iters = cfg.get_int("max_iters");
    opts.tol = cfg.get_real("tol");
    const std::string init = cfg.get("init");
    opts.init = init == "positive-bump"       ? InitMode::positive_bump
                : init == "analytic-extremal" ? InitMode::analytic_extremal
                                              : InitMode::user_grid;
    opts.init_width = cfg.get_real("init_width");
    opts.init_lambda = cfg.get_real("init_lambda");
    if (opts.init == InitMode::user_grid) {
        if (cfg.get("init_grid").empty()) throw UsageError("--init user-grid needs --init_grid");
        opts.user_grid = read_grid_csv(cfg.get("init_grid"));
    }
    MinimizeResult r;
    try {
        r = minimize_rayleigh(n, k, s, gs, opts);
    } catch (const MinimizeConvergenceError& e) {
        write_history(e.partial(), dir / cfg.get("history"));
        write_grid_csv(e.partial().grid, (dir / cfg.get("grid_out")).string());
        throw;
    }
    write_history(r, dir / cfg.get("history"));
    write_grid_csv(r.grid, (dir / cfg.get("grid_out")).string());
    sum.add("E_min", r.E_min);
    sum.add("K_est", recover_constant(r));
    sum.add("iterations", r.iterations);
    sum.add("final_constraint_defect", r.history.back().constraint_defect);
    if (s == 1.0) {
        const SharpConstant c = sharp_constant_K(n, k);
        sum.add("K_oracle", c.K, "", "quadrature of the normalization integral");
        sum.add("K_relative_error", rel_diff(r.K_est, c.K));
        const ExtremalFit fit = fit_extremal(r.grid);
        sum.add("fit_lambda", fit.lambda);
        sum.add("fit_relative_l2", fit.relative_error, "", "analytic extremal, best dilation");
        const double amp = fit.amplitude * ExtremalProfile(ExtremalParams{n, k, fit.lambda, {}}, 1.0).prefactor();
        sum.add("truncation_estimate", domain_truncation_estimate(n, amp, std::min(gs.rho_max, gs.r_max)));
    }
}

bool is_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::string first;
    std::getline(in, first);
    return first.rfind("# n=", 0) == 0;
}

RaySamples read_rays(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    if (line != "radius,value") throw UsageError(path + ": expected header 'radius,value' or a grid dump");
    RaySamples s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = line.find(',');
        try {
            if (c == std::string::npos) throw std::invalid_argument("missing comma");
            s.radii.push_back(std::stod(line.substr(0, c)));
            s.values.push_back(std::stod(line.substr(c + 1)));
        } catch (const std::exception&) {
            throw UsageError(path + ": malformed row '" + line + "'");
        }
    }
    return s;
}

void run_decay_fit(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const std::string input = cfg.get("input");
    RaySamples samples;
    int n = cfg.get_int("n");
    if (is_grid_file(input)) {
        const CylGrid g = read_grid_csv(input);
        n = g.n;
        const RayDirection d = parse_direction(cfg.get("direction"));
        double lo = cfg.get_real("fit_lo"), hi = cfg.get_real("fit_hi");
        if (lo <= 0.0) {
            const double core = core_scale(g, d);
            sum.add("core_scale", core);
            lo = 10.0 * core;
        }
        if (hi <= 0.0) hi = 0.1 * (g.has_r() ? std::min(g.rho.back(), g.r.back()) : g.rho.back());
        if (!(hi > lo)) throw FitDomainError("asymptotics", "empty fit range");
        samples = sample_ray(g, d, geometric_radii(lo, hi, cfg.get_int("samples")));
        sum.add_text("direction", to_string(d));
    } else {
        samples = read_rays(input);
    }
    CsvTable t({"radius", "value"});
    for (std::size_t i = 0; i < samples.radii.size(); ++i) t.row({samples.radii[i], samples.values[i]});
    t.write(dir / "rays.csv");

    const DecayFit fit = fit_decay(samples);
    sum.add("exponent", fit.exponent);
    sum.add("amplitude", fit.amplitude);
    sum.add("r_squared", fit.r_squared);
    sum.add("fit_radius_min", samples.radii.front());
    sum.add("fit_radius_max", samples.radii.back());
    const DecayMode mode = parse_decay_mode(cfg.get("mode"));
    const DecayVerdict v = check_decay_bounds(fit, n, cfg.get_real("p"), mode, cfg.get_real("tol"));
    sum.add("target", v.target, "", v.rule);
    sum.add_bool("pass", v.pass, to_string(mode));
}

void run_plot(const RunConfig& cfg, const fs::path& dir, Summary& sum) {
    const std::string input = cfg.get("input");
    PlotOptions po;
    po.loglog = cfg.get_flag("loglog");
    po.title = cfg.get("title");
    std::vector<Series> series;
    if (is_grid_file(input)) {
        const CylGrid g = read_grid_csv(input);
        const double t0 = g.rho.front();
        const double t1 = g.has_r() ? std::min(g.rho.back(), g.r.back()) : g.rho.back();
        const auto radii = geometric_radii(t0, t1, 200);
        std::vector<RayDirection> dirs{RayDirection::rho_axis};
        if (g.has_r()) dirs = {RayDirection::rho_axis, RayDirection::r_axis, RayDirection::diagonal};
        for (RayDirection d : dirs) {
            const RaySamples s = sample_ray(g, d, radii);
            series.push_back({to_string(d), s.radii, s.values});
        }
        po.xlabel = "distance from the origin";
        po.ylabel = "u";
    } else {
        std::ifstream in(input);
        std::string header;
        std::getline(in, header);
        if (header.rfind("iteration,energy", 0) == 0) {
            Series s{"energy", {}, {}};
            std::string line;
            while (std::getline(in, line)) {
                std::stringstream ss(line);
                std::string a, b;
                std::getline(ss, a, ',');
                std::getline(ss, b, ',');
                s.x.push_back(std::stod(a));
                s.y.push_back(std::stod(b));
            }
            series.push_back(s);
            po.xlabel = "iteration";
            po.ylabel = "energy";
        } else {
            const RaySamples s = read_rays(input);
            series.push_back({"samples", s.radii, s.values});
            po.xlabel = "radius";
            po.ylabel = "value";
        }
    }
    const fs::path out = dir / cfg.get("output");
    write_svg(out.string(), series, po);
    sum.add_text("plot", out.string());
    sum.add("series", static_cast<double>(series.size()));
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const fs::path dir(cfg.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (!fs::is_directory(dir)) throw UsageError("cannot create output directory " + cfg.output_dir);
        write_manifest(dir, cfg);
        Summary sum;
        switch (cfg.subcommand) {
        case Subcommand::exponents: run_exponents(cfg, sum); break;
        case Subcommand::quadrature: run_quadrature(cfg, dir, sum); break;
        case Subcommand::constant: run_constant(cfg, dir, sum); break;
        case Subcommand::verify_extremal: run_verify_extremal(cfg, dir, sum); break;
        case Subcommand::verify_prop4: run_verify_prop4(cfg, dir, sum); break;
        case Subcommand::minimize: run_minimize(cfg, dir, sum); break;
        case Subcommand::decay_fit: run_decay_fit(cfg, dir, sum); break;
        case Subcommand::plot: run_plot(cfg, dir, sum); break;
        }
        sum.write(dir, cfg, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << usage();
        return args.empty() ? 1 : 0;
    }
    try {
        return run(parse_args(args), std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << "run 'hsx --help' for the list of keys\n";
        return e.exit_code();
    }
}

} // namespace hsx::cli
