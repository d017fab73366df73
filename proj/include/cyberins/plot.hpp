/**
 * @file plot.hpp
 * @brief Plot-ready output for degree sweeps: a two-column data file and a
 * small self-contained SVG line chart.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cyberins {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string x_label = "degree";
    std::string y_label = "deductible";
    std::string title;
};

/// "# degree deductible" header then one "x y" row per point, 12 significant digits.
std::string render_dat(const PlotSeries& series);

/**
 * Line chart with one polyline through all points (omitted for a single
 * point) and one marker per point. Each marker carries data-x and data-y
 * attributes with the plotted values at 12 significant digits.
 */
std::string render_svg(const PlotSeries& series);

struct PlotFiles {
    std::filesystem::path dat;
    std::filesystem::path svg;
};

/// Read a sweep CSV and write "<stem>.dat" and "<stem>.svg" beside out_stem.
/// Throws std::invalid_argument on a malformed CSV.
PlotFiles emit_plot_data(const std::filesystem::path& sweep_csv,
                         const std::filesystem::path& out_stem);

}  // namespace cyberins
