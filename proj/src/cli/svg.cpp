#include "vanspec/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace vanspec::cli {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 70, kRight = 190, kTop = 40, kBottom = 55;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::vector<double> linear_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double map(double v) const {
        const double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
        return ((log ? std::log10(v) : v) - a) / (b - a);
    }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    Axis ax;
    ax.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values)
        if (ax.usable(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) {
        lo = log ? 0.1 : 0.0;
        hi = 1.0;
    }
    if (log) {
        lo = std::pow(10.0, std::floor(std::log10(lo)));
        hi = std::pow(10.0, std::ceil(std::log10(hi)));
        if (hi <= lo) hi = lo * 10.0;
    } else {
        if (hi <= lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        const auto t = linear_ticks(lo, hi);
        const double step = t.size() > 1 ? t[1] - t[0] : (hi - lo);
        lo = std::floor(lo / step) * step;
        hi = std::ceil(hi / step) * step;
    }
    ax.lo = lo;
    ax.hi = hi;
    return ax;
}

}  // namespace

std::string render_svg(const Plot& plot) {
    std::vector<double> xs, ys;
    for (const auto& s : plot.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = fit_axis(xs, false), ay = fit_axis(ys, plot.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + pw * ax.map(x); };
    auto py = [&](double y) { return kTop + ph * (1.0 - ay.map(y)); };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kLeft + pw / 2,
                       kTop - 15, escape(plot.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                       kTop, pw, ph);

    for (double t : linear_ticks(ax.lo, ax.hi)) {
        const double x = px(t);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", x, kTop,
                           kTop + ph);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", x, kTop + ph + 16, t);
    }
    std::vector<double> yticks;
    if (ay.log) {
        for (double t = ay.lo; t <= ay.hi * (1 + 1e-12); t *= 10.0) yticks.push_back(t);
    } else {
        yticks = linear_ticks(ay.lo, ay.hi);
    }
    for (double t : yticks) {
        const double y = py(t);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n", kLeft, y,
                           kLeft + pw);
        out += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 6, y + 4, t);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 15,
                       escape(plot.x_label));
    out += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                       kTop + ph / 2, escape(plot.y_label));

    for (std::size_t i = 0; i < plot.series.size(); ++i) {
        const auto& s = plot.series[i];
        const char* colour = kPalette[i % std::size(kPalette)];
        const std::string dash = s.dashed ? " stroke-dasharray=\"6 4\"" : "";
        std::string path;
        bool pen = false;
        auto visit = [&](double x, double y) {
            if (!ax.usable(x) || !ay.usable(y)) {
                pen = false;
                return;
            }
            path += fmt::format("{}{:.2f},{:.2f} ", pen ? "L" : "M", px(x), py(y));
            pen = true;
        };
        if (s.steps) {
            for (std::size_t k = 0; k + 1 < s.x.size() && k < s.y.size(); ++k) {
                visit(s.x[k], s.y[k]);
                visit(s.x[k + 1], s.y[k]);
            }
        } else {
            for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) visit(s.x[k], s.y[k]);
        }
        out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{}/>\n", path, colour, dash);
        const double ly = kTop + 12 + 18 * static_cast<double>(i);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"{4}/>\n",
                           kLeft + pw + 12, ly, kLeft + pw + 38, colour, dash);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 44, ly + 4, escape(s.label));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace vanspec::cli
