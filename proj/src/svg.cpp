#include "fragmenta/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fragmenta/math_util.hpp"

namespace fragmenta {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 70, kRight = 30, kTop = 50, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double to_unit(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return (x - a) / (b - a);
    }

    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
            const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
            for (int e = e0; e <= e1; ++e) t.push_back(std::pow(10.0, e));
            if (t.size() < 2) {
                t = {lo, std::sqrt(lo * hi), hi};
            }
        } else {
            const double span = hi - lo;
            const double raw = span / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double s : {1.0, 2.0, 5.0, 10.0}) {
                if (raw <= s * mag) { step = s * mag; break; }
            }
            for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
                t.push_back(v);
        }
        return t;
    }
};

} // namespace

std::string render_svg(const PlotSpec& spec) {
    // collect plottable points
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    std::size_t usable = 0;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_svg: series '" + s.label +
                                        "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (spec.log_x && !(x > 0.0)) continue;
            if (spec.log_y && !(y > 0.0)) continue;
            x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
            ++usable;
        }
    }
    if (usable == 0)
        throw std::runtime_error("render_svg: no plottable data points");
    if (x_lo == x_hi) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_lo == y_hi) { y_lo -= 0.5; y_hi += 0.5; }
    if (!spec.log_x) { const double m = 0.03 * (x_hi - x_lo); x_lo -= m; x_hi += m; }
    if (!spec.log_y) { const double m = 0.06 * (y_hi - y_lo); y_lo -= m; y_hi += m; }

    const Axis ax{x_lo, x_hi, spec.log_x};
    const Axis ay{y_lo, y_hi, spec.log_y};
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + pw * ax.to_unit(v); };
    auto py = [&](double v) { return kTop + ph * (1.0 - ay.to_unit(v)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + spec.title + "</text>\n";

    // frame
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (double t : ax.ticks()) {
        if (t < x_lo || t > x_hi) continue;
        const double X = px(t);
        svg += "<line x1=\"" + fmt(X) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(X) +
               "\" y2=\"" + fmt(kTop + ph + 5) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(X) + "\" y=\"" + fmt(kTop + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(t) + "</text>\n";
    }
    for (double t : ay.ticks()) {
        if (t < y_lo || t > y_hi) continue;
        const double Y = py(t);
        svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(Y) + "\" x2=\"" +
               fmt(kLeft) + "\" y2=\"" + fmt(Y) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(Y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(t) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           spec.x_label + "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " + fmt(kTop + ph / 2) + ")\">" + spec.y_label +
           "</text>\n";

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        std::string pts;
        std::size_t kept = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (spec.log_x && !(x > 0.0)) continue;
            if (spec.log_y && !(y > 0.0)) continue;
            if (s.points_only) {
                svg += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
                       "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
            } else {
                pts += (kept ? " " : "") + fmt(px(x)) + "," + fmt(py(y));
            }
            ++kept;
        }
        if (!s.points_only && kept > 0)
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
                   std::string(color) + "\" stroke-width=\"1.5\"/>\n";
        // legend
        const double ly = kTop + 16 + 16 * static_cast<double>(si);
        svg += "<rect x=\"" + fmt(kLeft + pw - 150) + "\" y=\"" + fmt(ly - 9) +
               "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
        svg += "<text x=\"" + fmt(kLeft + pw - 135) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
    }

    double ann_y = kTop + 16;
    for (const auto& a : spec.annotations) {
        svg += "<text x=\"" + fmt(kLeft + 8) + "\" y=\"" + fmt(ann_y) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">" + a +
               "</text>\n";
        ann_y += 15;
    }

    svg += "</svg>\n";
    return svg;
}

ReportPart build_report(const CsvTable& table, const std::string& name) {
    ReportPart part;

    if (table.has("x") && table.has("empirical") && table.has("theory")) {
        const auto x = table.numeric("x");
        const auto emp = table.numeric("empirical");
        const auto th = table.numeric("theory");
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            worst = std::max(worst, std::abs(emp[i] - th[i]));
        part.plot.title = name + ": empirical vs theory";
        part.plot.x_label = "x";
        part.plot.y_label = "cdf";
        part.plot.series.push_back({"empirical", x, emp, false});
        part.plot.series.push_back({"theory", x, th, false});
        part.plot.annotations.push_back("max |empirical-theory| = " + fmt(worst));
        part.summary = name + ": overlay, " + std::to_string(x.size()) +
                       " rows, max |empirical-theory| = " + fmt(worst);
        return part;
    }

    const bool has_size = table.has("size") || table.has("k");
    if (has_size && table.has("count")) {
        const auto x = table.numeric(table.has("size") ? "size" : "k");
        const auto y = table.numeric("count");
        const auto fit = fit_loglog(x, y);
        part.plot.title = name + ": size profile";
        part.plot.x_label = table.has("size") ? "size" : "k";
        part.plot.y_label = "count";
        part.plot.log_x = true;
        part.plot.log_y = true;
        part.plot.series.push_back({"counts", x, y, true});
        part.plot.annotations.push_back("fitted log-log slope = " + fmt(fit.slope));
        part.summary = name + ": profile, " + std::to_string(x.size()) +
                       " rows, log-log slope = " + fmt(fit.slope);
        return part;
    }

    if (table.has("m") && table.has("re") && table.has("im")) {
        const auto re = table.numeric("re");
        const auto im = table.numeric("im");
        double max_res = 0.0;
        if (table.has("residual"))
            for (double r : table.numeric("residual")) max_res = std::max(max_res, r);
        part.plot.title = name + ": characteristic roots";
        part.plot.x_label = "Re z";
        part.plot.y_label = "Im z";
        part.plot.series.push_back({"roots", re, im, true});
        part.plot.annotations.push_back("max residual = " + fmt(max_res));
        part.summary = name + ": roots, " + std::to_string(re.size()) +
                       " rows, max residual = " + fmt(max_res);
        return part;
    }

    // generic fallback: first numeric column against every other numeric one
    std::vector<std::size_t> nums;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        try {
            (void)table.numeric(table.columns[i]);
            nums.push_back(i);
        } catch (const std::exception&) {
        }
    }
    if (nums.size() >= 2) {
        const auto x = table.numeric(table.columns[nums[0]]);
        part.plot.title = name;
        part.plot.x_label = table.columns[nums[0]];
        for (std::size_t k = 1; k < nums.size(); ++k)
            part.plot.series.push_back(
                {table.columns[nums[k]], x, table.numeric(table.columns[nums[k]]), false});
        part.summary = name + ": generic, " + std::to_string(x.size()) + " rows, " +
                       std::to_string(nums.size() - 1) + " series over '" +
                       table.columns[nums[0]] + "'";
        return part;
    }

    throw std::runtime_error(name + ": CSV schema mismatch: missing column 'x' "
                             "(or 'size'/'k', or 'm') and fewer than two numeric "
                             "columns");
}

} // namespace fragmenta
