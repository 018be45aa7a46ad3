#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmnalm/experiments.hpp"

namespace cmnalm::plot {

enum class XScale { automatic, linear, log };

struct PlotOptions {
    std::string title;
    std::string x_label = "grid value";
    XScale x_scale = XScale::automatic;
    std::optional<std::string> highlight; // shade grid points where this variant ≥ baseline
    std::string baseline = "Lp-ADM";
    int width = 640;
    int height = 420;
};

// Maps data coordinates onto a pixel interval (linear or log10).
struct AxisMap {
    double lo = 0.0;
    double hi = 1.0;
    double px_lo = 0.0;
    double px_hi = 1.0;
    bool log = false;

    double operator()(double v) const;
};

/// Automatic scale: log when every value is positive and they span ≥ 2 decades.
bool prefers_log(const std::vector<double>& xs);

/// Line chart with one polyline per variant (in order of first appearance).
std::string render_svg(const std::vector<ResultRow>& rows, const PlotOptions& options);

} // namespace cmnalm::plot
