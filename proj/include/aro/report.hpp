#ifndef ARO_REPORT_HPP
#define ARO_REPORT_HPP

// CSV and SVG renderings of traced frontiers and benchmark tables. Every
// number goes through format_double, so output bytes depend only on the
// values, never on the locale.

#include <aro/error.hpp>
#include <aro/frontier.hpp>
#include <aro/numfmt.hpp>
#include <aro/orlib.hpp>

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

namespace aro {

/// Write to a sibling temp file and rename over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw InputError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move " + tmp.string() + " to " + path.string());
    }
}

inline std::string frontier_csv(const std::vector<FrontierPoint>& points, const ErrorReport& report,
                                int k)
{
    std::string out = "lambda,return,stddev,variance,percentage_error,extrapolated";
    for (int a = 1; a <= k; ++a) {
        out += ",asset_" + std::to_string(a) + ",weight_" + std::to_string(a);
    }
    out += '\n';
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& pt = points[p];
        const auto& err = report.per_point.at(p);
        out += format_double(pt.lambda) + ',' + format_double(pt.expected_return) + ','
               + format_double(pt.stddev) + ',' + format_double(pt.variance) + ','
               + format_double(err.percentage_error) + ',' + (err.extrapolated ? "1" : "0");
        for (std::size_t a = 0; a < pt.portfolio.size(); ++a) {
            out += ',' + std::to_string(pt.portfolio.indices[a]) + ','
                   + format_double(pt.portfolio.weights[a]);
        }
        out += '\n';
    }
    return out;
}

struct RunStats {
    long bud_evaluations = 0;
    double seconds = 0.0;
    bool include_timing = false;
};

/// Per-point metrics, a `mean` row, then '#' comment lines.
inline std::string errors_csv(const std::vector<FrontierPoint>& points, const ErrorReport& report,
                              const RunStats& stats)
{
    std::string out = "lambda,return,stddev,reference_stddev,reference_return,stddev_error,"
                      "return_error,percentage_error,extrapolated\n";
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& pt = points[p];
        const auto& e = report.per_point.at(p);
        out += format_double(pt.lambda) + ',' + format_double(pt.expected_return) + ','
               + format_double(pt.stddev) + ',' + format_double(e.reference_stddev) + ','
               + format_double(e.reference_return) + ',' + format_double(e.stddev_error) + ','
               + format_double(e.return_error) + ',' + format_double(e.percentage_error) + ','
               + (e.extrapolated ? "1" : "0") + '\n';
    }
    out += "mean,,,,,,," + format_double(report.mean_percentage_error) + ",\n";
    out += "# points=" + std::to_string(points.size()) + '\n';
    out += "# bud_evaluations=" + std::to_string(stats.bud_evaluations) + '\n';
    if (stats.include_timing) {
        out += "# wall_seconds=" + format_double(stats.seconds) + '\n';
        const double rate = stats.seconds > 0.0
                                ? static_cast<double>(stats.bud_evaluations) / stats.seconds
                                : 0.0;
        out += "# buds_per_second=" + format_double(rate) + '\n';
    }
    return out;
}

inline std::string benchmark_csv(const BenchmarkTable& table)
{
    std::string out = "index_name,N,GA,SA,TS,PSO,ARO\n";
    auto published_cells = [](const PublishedErrors* p) {
        if (p == nullptr) {
            return std::string(",,,,");
        }
        return format_double(p->ga) + ',' + format_double(p->sa) + ',' + format_double(p->ts)
               + ',' + format_double(p->pso) + ',';
    };
    for (const auto& row : table.rows) {
        const int n = row.n_assets != 0 ? row.n_assets
                                        : (row.published != nullptr ? row.published->n_assets : 0);
        out += row.name + ',' + (n != 0 ? std::to_string(n) : std::string("-")) + ','
               + published_cells(row.published)
               + (row.aro_error ? format_double(*row.aro_error) : std::string("FAILED")) + '\n';
    }
    const auto avg = table.average();
    out += "Average,-," + published_cells(&published_average)
           + (avg ? format_double(*avg) : std::string("FAILED")) + '\n';
    return out;
}

namespace detail {

inline std::string svg_num(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c; break;
        }
    }
    return out;
}

} // namespace detail

/// Reference frontier as a polyline, heuristic points as circles;
/// extrapolated points are drawn hollow in red. Risk (stddev) on x.
inline std::string frontier_svg(const std::vector<FrontierPoint>& points, const ErrorReport& report,
                                const ReferenceFrontier& ref, const std::string& title)
{
    constexpr double width = 800, height = 560;
    constexpr double left = 80, right = 30, top = 50, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = ref.points().front().stddev, x_max = x_min;
    double y_min = ref.points().front().mean_return, y_max = y_min;
    auto extend = [&](double x, double y) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    };
    for (const auto& k : ref.points()) {
        extend(k.stddev, k.mean_return);
    }
    for (const auto& p : points) {
        extend(p.stddev, p.expected_return);
    }
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }
    if (y_max == y_min) {
        y_max = y_min + 1.0;
    }
    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
           "viewBox=\"0 0 800 560\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
           + detail::xml_escape(title) + "</text>\n";
    svg += "<rect x=\"" + detail::svg_num(left) + "\" y=\"" + detail::svg_num(top) + "\" width=\""
           + detail::svg_num(plot_w) + "\" height=\"" + detail::svg_num(plot_h)
           + "\" fill=\"none\" stroke=\"#444\"/>\n";

    constexpr int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double fx = x_min + (x_max - x_min) * t / ticks;
        const double fy = y_min + (y_max - y_min) * t / ticks;
        svg += "<text x=\"" + detail::svg_num(sx(fx)) + "\" y=\""
               + detail::svg_num(top + plot_h + 18) + "\" text-anchor=\"middle\">"
               + format_double(fx).substr(0, 8) + "</text>\n";
        svg += "<text x=\"" + detail::svg_num(left - 6) + "\" y=\"" + detail::svg_num(sy(fy) + 4)
               + "\" text-anchor=\"end\">" + format_double(fy).substr(0, 8) + "</text>\n";
    }
    svg += "<text x=\"" + detail::svg_num(left + plot_w / 2) + "\" y=\"" +
           detail::svg_num(height - 15) + "\" text-anchor=\"middle\">standard deviation</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::svg_num(top + plot_h / 2)
           + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
           + detail::svg_num(top + plot_h / 2) + ")\">expected return</text>\n";

    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& k : ref.points()) {
        svg += detail::svg_num(sx(k.stddev)) + ',' + detail::svg_num(sy(k.mean_return)) + ' ';
    }
    svg += "\"/>\n";

    for (std::size_t p = 0; p < points.size(); ++p) {
        const bool flagged = p < report.per_point.size() && report.per_point[p].extrapolated;
        svg += "<circle cx=\"" + detail::svg_num(sx(points[p].stddev)) + "\" cy=\""
               + detail::svg_num(sy(points[p].expected_return)) + "\" r=\"3.5\" "
               + (flagged ? "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\""
                          : "fill=\"#ff7f0e\" stroke=\"#333\" stroke-width=\"0.5\"")
               + "/>\n";
    }

    const double lx = left + 12, ly = top + 16;
    svg += "<line x1=\"" + detail::svg_num(lx) + "\" y1=\"" + detail::svg_num(ly) + "\" x2=\""
           + detail::svg_num(lx + 24) + "\" y2=\"" + detail::svg_num(ly)
           + "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + detail::svg_num(lx + 30) + "\" y=\"" + detail::svg_num(ly + 4)
           + "\">reference frontier</text>\n";
    svg += "<circle cx=\"" + detail::svg_num(lx + 12) + "\" cy=\"" + detail::svg_num(ly + 18)
           + "\" r=\"3.5\" fill=\"#ff7f0e\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
    svg += "<text x=\"" + detail::svg_num(lx + 30) + "\" y=\"" + detail::svg_num(ly + 22)
           + "\">ARO portfolios</text>\n";
    svg += "<circle cx=\"" + detail::svg_num(lx + 12) + "\" cy=\"" + detail::svg_num(ly + 36)
           + "\" r=\"3.5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + detail::svg_num(lx + 30) + "\" y=\"" + detail::svg_num(ly + 40)
           + "\">outside reference range</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace aro

#endif // ARO_REPORT_HPP
