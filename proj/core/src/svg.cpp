#include "gdsq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gdsq/common.hpp"

namespace gdsq {
namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Frame {
    double x_lo, x_hi, y_lo, y_hi;
    int width, height;
    double margin;

    double px(double x) const {
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2.0 * margin);
    }
    // SVG y grows downward.
    double py(double y) const {
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2.0 * margin);
    }
};

void open_svg(std::ostringstream& out, int width, int height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
}

}  // namespace

std::string render_singular_curve_svg(const SingularCurve& curve, const GdsMap& g, int width,
                                      int height) {
    if (g.ambient_dim() != 2) fail("the singular-curve plot needs a planar map");
    Frame fr{curve.window.x1_lo, curve.window.x1_hi, curve.window.x2_lo, curve.window.x2_hi,
             width, height, 24.0};
    std::ostringstream out;
    open_svg(out, width, height);
    out << "<rect x=\"" << num(fr.margin) << "\" y=\"" << num(fr.margin) << "\" width=\""
        << num(width - 2.0 * fr.margin) << "\" height=\"" << num(height - 2.0 * fr.margin)
        << "\" fill=\"none\" stroke=\"#999\"/>\n";

    for (const auto& comp : curve.components) {
        if (comp.points.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"#3465a4\" stroke-width=\"1.5\" points=\"";
            for (const auto& p : comp.points)
                out << num(fr.px(p[0])) << ',' << num(fr.py(p[1])) << ' ';
            out << "\"/>\n";
        }
        for (std::size_t k = 0; k < comp.points.size(); ++k) {
            const double x = fr.px(comp.points[k][0]);
            const double y = fr.py(comp.points[k][1]);
            switch (comp.classes[k]) {
                case PointClass::Fold:
                    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
                        << "\" r=\"1.2\" fill=\"#3465a4\"/>\n";
                    break;
                case PointClass::Cusp:
                    out << "<g stroke=\"#cc0000\" stroke-width=\"2\">"
                        << "<line x1=\"" << num(x - 6) << "\" y1=\"" << num(y - 6) << "\" x2=\""
                        << num(x + 6) << "\" y2=\"" << num(y + 6) << "\"/>"
                        << "<line x1=\"" << num(x - 6) << "\" y1=\"" << num(y + 6) << "\" x2=\""
                        << num(x + 6) << "\" y2=\"" << num(y - 6) << "\"/></g>\n";
                    break;
                case PointClass::Degenerate:
                    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
                        << "\" r=\"3\" fill=\"none\" stroke=\"#75507b\"/>\n";
                    break;
                case PointClass::Unresolved:
                    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
                        << "\" r=\"2\" fill=\"#aaaaaa\"/>\n";
                    break;
            }
        }
    }

    const auto& centers = g.centers();
    for (Eigen::Index i = 0; i < centers.count(); ++i) {
        const double cx = centers(i, 0);
        const double cy = centers(i, 1);
        if (cx < fr.x_lo || cx > fr.x_hi || cy < fr.y_lo || cy > fr.y_hi) continue;
        out << "<circle cx=\"" << num(fr.px(cx)) << "\" cy=\"" << num(fr.py(cy))
            << "\" r=\"5\" fill=\"#f57900\" stroke=\"#000\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_margin_histogram_svg(const MonteCarloSummary& s, int bins, int width,
                                        int height) {
    if (bins < 1) fail("histogram needs at least one bin, got ", bins);
    if (s.margins.empty()) fail("no margins to plot");
    const double lo = *std::min_element(s.margins.begin(), s.margins.end());
    const double hi = *std::max_element(s.margins.begin(), s.margins.end());
    const double span = hi > lo ? hi - lo : 1.0;

    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (const double m : s.margins) {
        int b = static_cast<int>((m - lo) / span * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const int peak = *std::max_element(counts.begin(), counts.end());

    const double margin = 36.0;
    std::ostringstream out;
    open_svg(out, width, height);
    const double plot_w = width - 2.0 * margin;
    const double plot_h = height - 2.0 * margin;
    for (int b = 0; b < bins; ++b) {
        const double h = plot_h * counts[static_cast<std::size_t>(b)] / peak;
        const double x = margin + plot_w * b / bins;
        out << "<rect x=\"" << num(x) << "\" y=\"" << num(height - margin - h) << "\" width=\""
            << num(plot_w / bins * 0.92) << "\" height=\"" << num(h)
            << "\" fill=\"#3465a4\"/>\n";
    }
    out << "<line x1=\"" << num(margin) << "\" y1=\"" << num(height - margin) << "\" x2=\""
        << num(width - margin) << "\" y2=\"" << num(height - margin)
        << "\" stroke=\"#000\"/>\n";
    out << "<text x=\"" << num(margin) << "\" y=\"" << num(height - margin + 16.0)
        << "\" font-size=\"12\">" << num(lo) << "</text>\n";
    out << "<text x=\"" << num(width - margin - 40.0) << "\" y=\"" << num(height - margin + 16.0)
        << "\" font-size=\"12\">" << num(hi) << "</text>\n";
    out << "<text x=\"" << num(margin) << "\" y=\"" << num(margin - 10.0)
        << "\" font-size=\"12\">" << s.theorem << " margins, " << s.trials << " trials</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace gdsq
