#include "cmnalm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace cmnalm::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points; // (grid, mean)
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<Series> group(const std::vector<ResultRow>& rows) {
    std::vector<Series> out;
    std::map<std::string, std::size_t> index;
    for (const auto& r : rows) {
        auto [it, inserted] = index.try_emplace(r.variant, out.size());
        if (inserted) out.push_back({r.variant, {}});
        out[it->second].points.emplace_back(r.grid_value, r.mean_snr_db);
    }
    for (auto& s : out) {
        std::stable_sort(s.points.begin(), s.points.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return out;
}

std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

} // namespace

double AxisMap::operator()(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return px_lo + t * (px_hi - px_lo);
}

bool prefers_log(const std::vector<double>& xs) {
    if (xs.empty()) return false;
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    return *mn > 0.0 && *mx / *mn >= 100.0;
}

std::string render_svg(const std::vector<ResultRow>& rows, const PlotOptions& opt) {
    if (rows.empty()) throw std::invalid_argument("render_svg: no rows");
    const auto series = group(rows);

    std::vector<double> xs, ys;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x)) continue;
            xs.push_back(x);
            if (std::isfinite(y)) ys.push_back(y);
        }
    }
    if (xs.empty()) throw std::invalid_argument("render_svg: no finite grid values");

    const bool log_x = opt.x_scale == XScale::log || (opt.x_scale == XScale::automatic && prefers_log(xs));
    if (log_x && *std::min_element(xs.begin(), xs.end()) <= 0.0) {
        throw std::invalid_argument("render_svg: log x axis needs positive grid values");
    }
    double x_lo = *std::min_element(xs.begin(), xs.end());
    double x_hi = *std::max_element(xs.begin(), xs.end());
    if (x_lo == x_hi) {
        if (log_x) {
            x_lo /= 10.0;
            x_hi *= 10.0;
        } else {
            x_lo -= 0.5;
            x_hi += 0.5;
        }
    }
    double y_lo = ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end());
    double y_hi = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
    if (y_lo == y_hi) {
        y_lo -= 1.0;
        y_hi += 1.0;
    } else {
        const double pad = 0.05 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;
    }

    const double left = 70, right = 170, top = 40, bottom = 55;
    const double w = opt.width, h = opt.height;
    const AxisMap xmap{x_lo, x_hi, left, w - right, log_x};
    const AxisMap ymap{y_lo, y_hi, h - bottom, top, false};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
           std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
           std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty()) {
        svg += "<text x=\"" + num(w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + esc(opt.title) +
               "</text>\n";
    }

    // Preference regions: each grid point owns the span between its neighbours' midpoints.
    if (opt.highlight) {
        const Series* hi_s = nullptr;
        const Series* base = nullptr;
        for (const auto& s : series) {
            if (s.label == *opt.highlight) hi_s = &s;
            if (s.label == opt.baseline) base = &s;
        }
        if (!hi_s) throw std::invalid_argument("render_svg: no variant named '" + *opt.highlight + "'");
        if (!base) throw std::invalid_argument("render_svg: no baseline named '" + opt.baseline + "'");
        const auto& bp = base->points;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            const double gx = bp[i].first;
            const auto match = std::find_if(hi_s->points.begin(), hi_s->points.end(),
                                            [&](const auto& p) { return p.first == gx; });
            if (match == hi_s->points.end() || !(match->second >= bp[i].second)) continue;
            const double px = xmap(gx);
            const double x0 = i == 0 ? std::max(left, px - 6.0) : 0.5 * (px + xmap(bp[i - 1].first));
            const double x1 = i + 1 == bp.size() ? std::min(w - right, px + 6.0) : 0.5 * (px + xmap(bp[i + 1].first));
            svg += "<rect class=\"preference\" x=\"" + num(x0) + "\" y=\"" + num(top) + "\" width=\"" + num(x1 - x0) +
                   "\" height=\"" + num(h - bottom - top) + "\" fill=\"#ffd54f\" fill-opacity=\"0.35\"/>\n";
        }
    }

    // Axes and ticks.
    svg += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(h - bottom) + "\" x2=\"" + num(w - right) + "\" y2=\"" +
           num(h - bottom) + "\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(h - bottom) +
           "\"/>\n</g>\n";
    std::vector<double> xticks;
    if (log_x) {
        for (double d = std::ceil(std::log10(x_lo) - 1e-9); d <= std::log10(x_hi) + 1e-9; d += 1.0) xticks.push_back(std::pow(10.0, d));
    } else {
        xticks = linear_ticks(x_lo, x_hi);
    }
    for (double t : xticks) {
        const double px = xmap(t);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(h - bottom) + "\" x2=\"" + num(px) + "\" y2=\"" +
               num(h - bottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" + num(h - bottom + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";
    }
    for (double t : linear_ticks(y_lo, y_hi)) {
        const double py = ymap(t);
        svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(left) + "\" y2=\"" + num(py) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
               "</text>\n";
    }
    svg += "<text x=\"" + num((left + w - right) / 2) + "\" y=\"" + num(h - 12) + "\" text-anchor=\"middle\">" +
           esc(opt.x_label) + (log_x ? " (log)" : "") + "</text>\n";
    svg += "<text transform=\"translate(18," + num((top + h - bottom) / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">mean SNR (dB)</text>\n";

    // Series.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        std::string pts;
        std::string markers;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            const std::string px = num(xmap(x)), py = num(ymap(y));
            if (!pts.empty()) pts += ' ';
            pts += px + ',' + py;
            markers += "<circle class=\"marker\" cx=\"" + px + "\" cy=\"" + py + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        }
        svg += "<polyline class=\"series\" data-variant=\"" + esc(s.label) + "\" points=\"" + pts +
               "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        svg += markers;
        const double ly = top + 8 + 16.0 * static_cast<double>(si);
        svg += "<line x1=\"" + num(w - right + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(w - right + 32) + "\" y2=\"" +
               num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(w - right + 36) + "\" y=\"" + num(ly + 4) + "\">" + esc(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace cmnalm::plot
