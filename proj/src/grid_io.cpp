#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hsx/cylinder_grid.hpp"
#include "hsx/errors.hpp"

namespace hsx {

namespace {

const char* const kModule = "grid_io";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size()) {
        std::ostringstream os;
        os << "line " << line << ": cannot parse number '" << field << "'";
        throw DomainError(kModule, os.str());
    }
    return v;
}

} // namespace

void write_grid_csv(const CylGrid& grid, std::ostream& out) {
    out << "# n=" << grid.n << ",k=" << grid.k << ",grading=" << fmt(grid.grading) << "\n";
    out << "rho,r,value\n";
    for (std::size_t i = 0; i < grid.n_rho(); ++i) {
        for (std::size_t j = 0; j < grid.n_r(); ++j) {
            out << fmt(grid.rho[i]) << ',';
            if (grid.has_r()) out << fmt(grid.r[j]);
            out << ',' << fmt(grid.at(i, j)) << '\n';
        }
    }
}

void write_grid_csv(const CylGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError(kModule, "cannot open " + path + " for writing");
    write_grid_csv(grid, out);
}

CylGrid read_grid_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw DomainError(kModule, "empty grid file");
    CylGrid g;
    char grading[64] = {0};
    if (std::sscanf(line.c_str(), "# n=%d,k=%d,grading=%63s", &g.n, &g.k, grading) != 3)
        throw DomainError(kModule, "line 1: expected '# n=..,k=..,grading=..'");
    g.grading = parse_double(grading, lineno);
    if (g.n < 3 || g.k < 2 || g.k > g.n) throw DomainError(kModule, "line 1: invalid (n, k)");
    ++lineno;
    if (!std::getline(in, line) || line != "rho,r,value")
        throw DomainError(kModule, "line 2: expected header 'rho,r,value'");

    std::vector<double> rho_col, r_col;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw DomainError(kModule, "line " + std::to_string(lineno) + ": expected 3 fields");
        const double rho = parse_double(line.substr(0, c1), lineno);
        const std::string rf = line.substr(c1 + 1, c2 - c1 - 1);
        const double value = parse_double(line.substr(c2 + 1), lineno);
        if (g.has_r() == rf.empty())
            throw DomainError(kModule, "line " + std::to_string(lineno) + ": r column inconsistent with k");
        if (g.rho.empty() || g.rho.back() != rho) g.rho.push_back(rho);
        if (g.has_r() && g.rho.size() == 1) g.r.push_back(parse_double(rf, lineno));
        if (g.has_r()) r_col.push_back(parse_double(rf, lineno));
        rho_col.push_back(rho);
        g.values.push_back(value);
    }
    if (g.rho.size() < 3 || g.values.size() != g.n_rho() * g.n_r())
        throw DomainError(kModule, "grid rows do not form a rectangular table");
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
        if (i > 0 && !(g.rho[i] > g.rho[i - 1])) throw DomainError(kModule, "rho nodes not increasing");
        for (std::size_t j = 0; j < g.n_r(); ++j) {
            const std::size_t idx = i * g.n_r() + j;
            if (rho_col[idx] != g.rho[i] || (g.has_r() && r_col[idx] != g.r[j]))
                throw DomainError(kModule, "grid rows are not in row-major order");
        }
    }
    return g;
}

CylGrid read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(kModule, "cannot open " + path);
    return read_grid_csv(in);
}

} // namespace hsx
