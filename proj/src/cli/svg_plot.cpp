#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hsx/cli.hpp"

namespace hsx::cli {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Axis {
    double lo, hi;
    bool log;
    double map(double v) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return t;
    }
};

Axis make_axis(double lo, double hi, bool log) {
    if (log) {
        lo = std::floor(std::log10(lo));
        hi = std::ceil(std::log10(hi));
    }
    if (hi <= lo) {
        const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
    return {lo, hi, log};
}

std::vector<double> ticks(const Axis& ax) {
    std::vector<double> t;
    if (ax.log) {
        const int step = std::max(1, static_cast<int>(std::ceil((ax.hi - ax.lo) / 8)));
        for (double e = ax.lo; e <= ax.hi + 1e-9; e += step) t.push_back(std::pow(10.0, e));
        return t;
    }
    const double raw = (ax.hi - ax.lo) / 6;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double unit = raw / mag < 2 ? 2 * mag : raw / mag < 5 ? 5 * mag : 10 * mag;
    for (double v = std::ceil(ax.lo / unit) * unit; v <= ax.hi + 1e-9 * unit; v += unit) t.push_back(v);
    return t;
}

} // namespace

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opts) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!opts.loglog || (x > 0 && y > 0));
    };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i])) {
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, s.y[i]);
                yhi = std::max(yhi, s.y[i]);
            }
    if (!(xlo <= xhi)) throw UsageError("nothing to plot: no finite points" + std::string(opts.loglog ? " with positive coordinates" : ""));
    const Axis ax = make_axis(xlo, xhi, opts.loglog), ay = make_axis(ylo, yhi, opts.loglog);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + pw * ax.map(x); };
    auto py = [&](double y) { return kTop + ph * (1.0 - ay.map(y)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opts.title.empty())
        os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
           << escape(opts.title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(ax)) {
        const double x = px(t);
        os << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << x << "\" y=\"" << kTop + ph + 16
           << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
       << escape(opts.xlabel) << "</text>\n";
    os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(opts.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        os << "\"/>\n";
        const double ly = kTop + 16 + 18 * k;
        os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw + 32
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::string& path, const std::vector<Series>& series, const PlotOptions& opts) {
    const std::string svg = render_svg(series, opts);
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << svg;
}

} // namespace hsx::cli
