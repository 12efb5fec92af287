// SPDX-License-Identifier: Apache-2.0
//
// Self-contained SVG line charts (log-y) for the sweep metrics. Hand-rolled
// on purpose: the plot-data files stay the canonical output, this is the
// zero-dependency quick look.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ofdmest::cli {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y; // nonpositive values are skipped (log scale)
};

inline std::string render_svg_chart(const std::string& title, const std::string& x_label,
                                    const std::string& y_label,
                                    const std::vector<SvgSeries>& series) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double w = 760, h = 520;
    const double ml = 80, mr = 170, mt = 50, mb = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, std::log10(s.y[i]));
            ymax = std::max(ymax, std::log10(s.y[i]));
        }
    if (xmin > xmax) { // nothing positive to draw
        xmin = 0;
        xmax = 1;
        ymin = -1;
        ymax = 0;
    }
    if (xmax == xmin) xmax = xmin + 1;
    ymin = std::floor(ymin - 1e-9);
    ymax = std::ceil(ymax + 1e-9);
    if (ymax == ymin) ymax = ymin + 1;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double logy) { return h - mb - (logy - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"18\">" << title << "</text>\n";

    // gridlines + ticks
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (double logy = ymin; logy <= ymax + 1e-9; logy += 1.0) {
        const double y = py(logy);
        out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << w - mr << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">1e" << int(logy) << "</text>\n";
    }
    const int xticks = 6;
    for (int i = 0; i <= xticks; ++i) {
        const double x = xmin + (xmax - xmin) * i / xticks;
        out << "<line x1=\"" << px(x) << "\" y1=\"" << h - mb << "\" x2=\"" << px(x) << "\" y2=\""
            << h - mb + 5 << "\" stroke=\"#333\"/>\n";
        std::ostringstream label;
        label << x;
        out << "<text x=\"" << px(x) << "\" y=\"" << h - mb + 20
            << "\" text-anchor=\"middle\">" << label.str() << "</text>\n";
    }
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << (mt + h - mb) / 2 << ")\">"
        << y_label << "</text>\n";
    out << "</g>\n";

    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"#333\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = colors[si % 8];
        std::ostringstream pts;
        bool any = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0.0)) continue;
            pts << px(s.x[i]) << ',' << py(std::log10(s.y[i])) << ' ';
            any = true;
        }
        if (any)
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0.0)) continue;
            out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(std::log10(s.y[i]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = mt + 20.0 * double(si);
        out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace ofdmest::cli
