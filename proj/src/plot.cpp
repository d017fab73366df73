#include "cyberins/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cyberins/analysis.hpp"
#include "cyberins/io.hpp"

namespace cyberins {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 60.0;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Range {
    double lo, hi;
    Range(const std::vector<double>& v) {
        lo = *std::min_element(v.begin(), v.end());
        hi = *std::max_element(v.begin(), v.end());
        if (hi - lo <= 0.0) {
            const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
    double map(double v, double from, double to) const { return from + (v - lo) / (hi - lo) * (to - from); }
};

void check(const PlotSeries& s) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
        throw std::invalid_argument("plot: series must be nonempty with matching lengths");
    }
}

}  // namespace

std::string render_dat(const PlotSeries& series) {
    check(series);
    std::ostringstream out;
    out << "# " << series.x_label << ' ' << series.y_label << '\n';
    for (std::size_t k = 0; k < series.x.size(); ++k) {
        out << format_csv_number(series.x[k]) << ' ' << format_csv_number(series.y[k]) << '\n';
    }
    return out.str();
}

std::string render_svg(const PlotSeries& series) {
    check(series);
    const Range xr(series.x), yr(series.y);
    auto sx = [&](double v) { return xr.map(v, kMargin, kWidth - kMargin); };
    auto sy = [&](double v) { return yr.map(v, kHeight - kMargin, kMargin); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!series.title.empty()) {
        out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << escape(series.title) << "</text>\n";
    }
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(series.x_label) << "</text>\n";
    out << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 " << kHeight / 2
        << ")\" text-anchor=\"middle\" font-size=\"12\">" << escape(series.y_label) << "</text>\n";
    for (double v : {yr.lo, yr.hi}) {
        out << "<text x=\"" << kMargin - 5 << "\" y=\"" << px(sy(v))
            << "\" text-anchor=\"end\" font-size=\"10\">" << format_csv_number(v) << "</text>\n";
    }
    for (double v : {xr.lo, xr.hi}) {
        out << "<text x=\"" << px(sx(v)) << "\" y=\"" << kHeight - kMargin + 15
            << "\" text-anchor=\"middle\" font-size=\"10\">" << format_csv_number(v) << "</text>\n";
    }

    if (series.x.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < series.x.size(); ++k) {
            if (k) out << ' ';
            out << px(sx(series.x[k])) << ',' << px(sy(series.y[k]));
        }
        out << "\"/>\n";
    }
    for (std::size_t k = 0; k < series.x.size(); ++k) {
        out << "<circle cx=\"" << px(sx(series.x[k])) << "\" cy=\"" << px(sy(series.y[k]))
            << "\" r=\"3\" fill=\"steelblue\" data-x=\"" << format_csv_number(series.x[k])
            << "\" data-y=\"" << format_csv_number(series.y[k]) << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

PlotFiles emit_plot_data(const std::filesystem::path& sweep_csv,
                         const std::filesystem::path& out_stem) {
    std::istringstream in(read_file(sweep_csv));
    const DegreeSweep sweep = read_sweep_csv(in, sweep_csv.stem().string());
    if (sweep.degrees.empty()) throw std::invalid_argument("sweep CSV has no rows");

    PlotSeries series;
    series.x.assign(sweep.degrees.begin(), sweep.degrees.end());
    series.y = sweep.deductible;
    series.title = "deductible by degree (" + sweep.label + ")";

    PlotFiles files;
    files.dat = out_stem;
    files.dat += ".dat";
    files.svg = out_stem;
    files.svg += ".svg";
    write_file_atomic(files.dat, render_dat(series));
    write_file_atomic(files.svg, render_svg(series));
    return files;
}

}  // namespace cyberins
