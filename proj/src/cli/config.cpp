#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hsx/cli.hpp"

namespace hsx::cli {

namespace {

KeySpec opt(std::string name, KeyType type, std::string def, std::string help) {
    return {std::move(name), type, std::move(def), false, {}, std::move(help)};
}

KeySpec req(std::string name, KeyType type, std::string help) {
    return {std::move(name), type, "", true, {}, std::move(help)};
}

KeySpec pick(std::string name, std::vector<std::string> choices, std::string help) {
    std::string def = choices.front();
    return {std::move(name), KeyType::choice, std::move(def), false, std::move(choices), std::move(help)};
}

const std::map<Subcommand, std::vector<KeySpec>>& all_schemas() {
    static const std::map<Subcommand, std::vector<KeySpec>> table = {
        {Subcommand::exponents,
         {opt("n", KeyType::integer, "3", "dimension"),
          opt("k", KeyType::integer, "2", "dimension of the singular factor"),
          opt("p", KeyType::real, "2", "integrability exponent"),
          opt("s", KeyType::real, "1", "weight exponent"),
          opt("gamma", KeyType::real, "1", "galaxy model exponent, 0 < gamma < 2"),
          opt("q", KeyType::real, "5", "exponent tested against the mass window")}},
        {Subcommand::quadrature,
         {pick("identity", {"beta-full", "beta-radial", "normalization", "newtonian"}, "integral to check"),
          opt("n", KeyType::integer, "3", "dimension"),
          opt("k", KeyType::integer, "2", "dimension of the singular factor"),
          opt("m", KeyType::real, "2", "power in (1+|z|^2)^{-m}"),
          opt("a", KeyType::real, "2", "power in (1+|x|^2)^{-a}"),
          opt("s", KeyType::real, "1", "weight exponent"),
          opt("z", KeyType::text, "", "comma-separated point for newtonian (default e_1 + e_n)"),
          opt("tol", KeyType::real, "1e-10", "relative tolerance")}},
        {Subcommand::constant,
         {opt("n", KeyType::integer, "3", "dimension"),
          opt("k", KeyType::integer, "2", "dimension of the singular factor"),
          opt("tol", KeyType::real, "1e-12", "quadrature tolerance")}},
        {Subcommand::verify_extremal,
         {opt("n", KeyType::integer, "3", "dimension"),
          opt("k", KeyType::integer, "2", "dimension of the singular factor"),
          opt("lambda", KeyType::real, "1", "dilation"),
          pick("convention", {"normalized", "printed"}, "amplitude convention"),
          opt("extent", KeyType::real, "4", "rho_max = r_max"),
          opt("nodes", KeyType::integer, "32", "nodes per dimension on the coarsest level"),
          opt("levels", KeyType::integer, "4", "refinement levels"),
          opt("grading", KeyType::real, "2", "grid grading")}},
        {Subcommand::verify_prop4,
         {opt("a", KeyType::integer, "1", "a = dim(x) - 1"),
          opt("b", KeyType::integer, "1", "b = dim(y) - 1"),
          opt("lambda", KeyType::real, "1", "dilation"),
          opt("alpha", KeyType::real, "0", "shift along |x|"),
          opt("beta", KeyType::real, "0", "shift along |y|"),
          opt("extent", KeyType::real, "2", "rho_max = r_max"),
          opt("nodes", KeyType::integer, "64", "nodes per dimension"),
          opt("levels", KeyType::integer, "3", "refinement levels for the v-form residual")}},
        {Subcommand::minimize,
         {opt("n", KeyType::integer, "3", "dimension"),
          opt("k", KeyType::integer, "2", "dimension of the singular factor"),
          opt("s", KeyType::real, "1", "weight exponent"),
          opt("rho_max", KeyType::real, "64", "grid extent in rho"),
          opt("r_max", KeyType::real, "64", "grid extent in r"),
          opt("n_rho", KeyType::integer, "128", "nodes in rho"),
          opt("n_r", KeyType::integer, "128", "nodes in r"),
          opt("grading", KeyType::real, "2", "grid grading"),
          opt("step", KeyType::real, "1", "initial pseudo-time step"),
          opt("max_iters", KeyType::integer, "2000", "iteration limit"),
          opt("tol", KeyType::real, "1e-11", "relative energy change at convergence"),
          pick("init", {"positive-bump", "analytic-extremal", "user-grid"}, "initial state"),
          opt("init_width", KeyType::real, "1", "bump width"),
          opt("init_lambda", KeyType::real, "1", "dilation of the analytic start"),
          opt("init_grid", KeyType::text, "", "grid dump for user-grid"),
          opt("history", KeyType::text, "history.csv", "history table"),
          opt("grid_out", KeyType::text, "minimizer.csv", "grid dump of the minimizer")}},
        {Subcommand::decay_fit,
         {req("input", KeyType::text, "grid dump or radius,value table"),
          pick("direction", {"diagonal", "rho-axis", "r-axis"}, "ray for grid input"),
          opt("fit_lo", KeyType::real, "0", "smallest fit radius (0: 10 x core scale)"),
          opt("fit_hi", KeyType::real, "0", "largest fit radius (0: a tenth of the grid)"),
          opt("samples", KeyType::integer, "24", "ray samples for grid input"),
          opt("n", KeyType::integer, "3", "dimension for ray-table input"),
          opt("p", KeyType::real, "2", "integrability exponent"),
          pick("mode", {"solution-two-sided", "subsolution-upper", "general-p"}, "decay bound"),
          opt("tol", KeyType::real, "0.1", "bound tolerance")}},
        {Subcommand::plot,
         {req("input", KeyType::text, "grid dump, history table or radius,value table"),
          opt("output", KeyType::text, "plot.svg", "svg file"),
          opt("loglog", KeyType::flag, "false", "logarithmic axes"),
          opt("title", KeyType::text, "", "plot title")}},
    };
    return table;
}

const KeySpec* find_key(Subcommand sub, const std::string& key) {
    const auto& keys = schema(sub);
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == key; });
    return it == keys.end() ? nullptr : &*it;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

bool parses_int(const std::string& v) {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    return r.ec == std::errc() && r.ptr == v.data() + v.size();
}

bool parses_real(const std::string& v) {
    if (v.empty()) return false;
    std::size_t used = 0;
    try {
        std::stod(v, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == v.size();
}

void check_value(const KeySpec& spec, const std::string& v) {
    bool ok = true;
    switch (spec.type) {
    case KeyType::integer: ok = parses_int(v); break;
    case KeyType::real: ok = parses_real(v); break;
    case KeyType::flag: ok = v == "true" || v == "false"; break;
    case KeyType::choice:
        ok = std::find(spec.choices.begin(), spec.choices.end(), v) != spec.choices.end();
        break;
    case KeyType::text: break;
    }
    if (!ok) {
        std::string what = "malformed value '" + v + "' for --" + spec.name;
        if (spec.type == KeyType::choice) {
            what += " (one of";
            for (const auto& c : spec.choices) what += " " + c;
            what += ")";
        }
        throw UsageError(what);
    }
}

void read_config_file(const std::string& path, Subcommand sub, std::map<std::string, std::string>& into,
                      std::string& output_dir) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = normalize_key(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "output_dir") {
            output_dir = value;
            continue;
        }
        if (!find_key(sub, key))
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " + to_string(sub));
        into[key] = value;
    }
}

} // namespace

std::string to_string(Subcommand sub) {
    switch (sub) {
    case Subcommand::exponents: return "exponents";
    case Subcommand::quadrature: return "quadrature";
    case Subcommand::constant: return "constant";
    case Subcommand::verify_extremal: return "verify-extremal";
    case Subcommand::verify_prop4: return "verify-prop4";
    case Subcommand::minimize: return "minimize";
    case Subcommand::decay_fit: return "decay-fit";
    case Subcommand::plot: return "plot";
    }
    return "?";
}

Subcommand parse_subcommand(const std::string& name) {
    for (const auto& [sub, keys] : all_schemas())
        if (to_string(sub) == name) return sub;
    throw UsageError("unknown subcommand '" + name + "'");
}

const std::vector<KeySpec>& schema(Subcommand sub) { return all_schemas().at(sub); }

RunConfig parse_args(const std::vector<std::string>& args) {
    if (args.empty()) throw UsageError("missing subcommand");
    RunConfig cfg{parse_subcommand(args[0]), {}, "."};

    std::map<std::string, std::string> flags;
    std::string config_path, flag_output_dir;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() == 2) throw UsageError("unexpected argument '" + a + "'");
        const std::string key = normalize_key(a.substr(2));
        if (key == "loglog" && (i + 1 == args.size() || args[i + 1].rfind("--", 0) == 0)) {
            flags[key] = "true";
            continue;
        }
        if (i + 1 == args.size()) throw UsageError("flag --" + key + " needs a value");
        const std::string& value = args[++i];
        if (key == "config")
            config_path = value;
        else if (key == "output_dir")
            flag_output_dir = value;
        else if (!find_key(cfg.subcommand, key))
            throw UsageError("unknown flag --" + key + " for " + to_string(cfg.subcommand));
        else
            flags[key] = value;
    }

    if (!config_path.empty()) read_config_file(config_path, cfg.subcommand, cfg.params, cfg.output_dir);
    for (auto& [k, v] : flags) cfg.params[k] = v;
    if (!flag_output_dir.empty()) cfg.output_dir = flag_output_dir;

    for (const KeySpec& spec : schema(cfg.subcommand)) {
        auto it = cfg.params.find(spec.name);
        if (it == cfg.params.end()) {
            if (spec.required) throw UsageError("missing required key --" + spec.name);
            cfg.params[spec.name] = spec.default_value;
        } else {
            check_value(spec, it->second);
        }
    }
    return cfg;
}

int RunConfig::get_int(const std::string& key) const { return std::stoi(get(key)); }

double RunConfig::get_real(const std::string& key) const { return std::stod(get(key)); }

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw UsageError("key --" + key + " is not set");
    return it->second;
}

bool RunConfig::get_flag(const std::string& key) const { return get(key) == "true"; }

std::string usage() {
    std::ostringstream os;
    os << "usage: hsx <subcommand> [--key value ...] [--config file] [--output_dir dir]\n";
    for (const auto& [sub, keys] : all_schemas()) {
        os << "\n  " << to_string(sub) << "\n";
        for (const auto& k : keys) {
            os << "    --" << k.name;
            if (k.required)
                os << " (required)";
            else if (!k.default_value.empty())
                os << " [" << k.default_value << "]";
            os << "  " << k.help << "\n";
        }
    }
    return os.str();
}

} // namespace hsx::cli
