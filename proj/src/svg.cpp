#include "leapclust/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace leapclust {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string scatter_svg(const PointSet& points, const ClusterAssignment& labels, const ScatterOptions& options) {
    if (points.dim() < 2) throw InputError("scatter plot needs at least two coordinates");
    if (labels.size() != points.size()) throw InputError("labels do not match the number of points");
    const RowMatrix& a = points.matrix();
    const double x0 = a.col(0).minCoeff(), x1 = a.col(0).maxCoeff();
    const double y0 = a.col(1).minCoeff(), y1 = a.col(1).maxCoeff();
    const double margin = 20.0;
    const double top = options.title.empty() ? margin : margin + 16.0;
    const double w = options.width - 2 * margin, h = options.height - top - margin;
    // Same scale on both axes so shapes are not distorted.
    const double span = std::max({x1 - x0, y1 - y0, 1e-300});
    const double s = std::min(w, h) / span;
    const double ox = margin + 0.5 * (w - s * (x1 - x0));
    const double oy = top + 0.5 * (h - s * (y1 - y0));

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
                      "\" height=\"" + std::to_string(options.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out += "<text x=\"" + fixed(margin) + "\" y=\"" + fixed(margin + 4) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + xml_escape(options.title) + "</text>\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double cx = ox + s * (a(i, 0) - x0);
        const double cy = oy + s * (y1 - a(i, 1));
        const int l = labels.labels[static_cast<std::size_t>(i)];
        const char* colour = kPalette[static_cast<std::size_t>(l) % std::size(kPalette)];
        out += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"" + fixed(options.radius) +
               "\" fill=\"" + colour + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace leapclust
