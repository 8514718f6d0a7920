#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fragmenta/io.hpp"

namespace fragmenta {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool points_only = false; // scatter instead of polyline
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
    std::vector<std::string> annotations;
};

// standalone SVG document; throws if no finite data point survives the
// log-scale filter
std::string render_svg(const PlotSpec& spec);

// Dispatch on the CSV header:
//   x, empirical, theory      -> overlay plot, summary reports max |diff|
//   size|k, count             -> log-log scatter with fitted slope
//   m, i, re, im, residual    -> root locations in the complex plane
// Anything else is a schema mismatch naming the first missing column.
struct ReportPart {
    PlotSpec plot;
    std::string summary;
};

ReportPart build_report(const CsvTable& table, const std::string& name);

} // namespace fragmenta
