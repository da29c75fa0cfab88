#ifndef GAPTRACK_SVG_HPP
#define GAPTRACK_SVG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gaptrack/changepoint.hpp"
#include "gaptrack/errors.hpp"
#include "gaptrack/trajectory.hpp"

namespace gaptrack {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace detail {

// Fixed two-decimal coordinates keep the output compact and identical
// across runs. Negative zero is collapsed so -0.001 and 0.001 cannot
// render as different strings for the same pixel.
inline std::string svg_num(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::fixed, 2);
    if (res.ec != std::errc()) {
        throw InternalError("svg_num: to_chars failed");
    }
    std::string s(buf, res.ptr);
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

struct LinearScale {
    double lo = 0.0;
    double hi = 1.0;
    double out_lo = 0.0;
    double out_hi = 1.0;

    double operator()(double x) const {
        const double span = hi - lo;
        if (span == 0.0) {
            return (out_lo + out_hi) / 2.0;
        }
        return out_lo + (x - lo) / span * (out_hi - out_lo);
    }
};

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors;
}

}  // namespace detail

// Line plot of the per-checkpoint gap with a dashed zero line; a detected
// change point is marked with exactly one vertical rule.
inline std::string plot_gap_trajectory(const GapSeries& series,
                                       const ChangePointResult& cp) {
    if (series.steps.empty() || series.steps.size() != series.gaps.size()) {
        throw ValidationError("plot_gap_trajectory: empty or ragged series");
    }
    const double width = 640.0;
    const double height = 360.0;
    const double margin = 48.0;

    double xmin = static_cast<double>(series.steps.front());
    double xmax = static_cast<double>(series.steps.back());
    if (xmin == xmax) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    double ymin = 0.0;
    double ymax = 0.0;
    for (double g : series.gaps) {
        ymin = std::min(ymin, g);
        ymax = std::max(ymax, g);
    }
    if (ymin == ymax) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    detail::LinearScale sx{xmin, xmax, margin, width - margin};
    detail::LinearScale sy{ymin, ymax, height - margin, margin};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"360\" viewBox=\"0 0 640 360\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"360\" "
           "fill=\"#ffffff\"/>\n";
    svg << "<text x=\"" << detail::svg_num(width / 2) << "\" y=\"22\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" << xml_escape(series.class_name)
        << "</text>\n";

    // Axes.
    svg << "<line class=\"axis\" x1=\"" << detail::svg_num(margin) << "\" y1=\""
        << detail::svg_num(height - margin) << "\" x2=\""
        << detail::svg_num(width - margin) << "\" y2=\""
        << detail::svg_num(height - margin)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << detail::svg_num(margin) << "\" y1=\""
        << detail::svg_num(margin) << "\" x2=\"" << detail::svg_num(margin)
        << "\" y2=\"" << detail::svg_num(height - margin)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // Zero reference line.
    const double y0 = sy(0.0);
    svg << "<line class=\"zero\" x1=\"" << detail::svg_num(margin)
        << "\" y1=\"" << detail::svg_num(y0) << "\" x2=\""
        << detail::svg_num(width - margin) << "\" y2=\"" << detail::svg_num(y0)
        << "\" stroke=\"#999999\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 3\"/>\n";

    // Detected change point.
    if (cp.detected && cp.step.has_value()) {
        const double x = sx(static_cast<double>(*cp.step));
        svg << "<line class=\"changepoint\" x1=\"" << detail::svg_num(x)
            << "\" y1=\"" << detail::svg_num(margin) << "\" x2=\""
            << detail::svg_num(x) << "\" y2=\""
            << detail::svg_num(height - margin)
            << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
    }

    svg << "<polyline class=\"gap\" fill=\"none\" stroke=\"#1f77b4\" "
           "stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.steps.size(); ++i) {
        if (i > 0) {
            svg << ' ';
        }
        svg << detail::svg_num(sx(static_cast<double>(series.steps[i]))) << ','
            << detail::svg_num(sy(series.gaps[i]));
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series.steps.size(); ++i) {
        svg << "<circle cx=\""
            << detail::svg_num(sx(static_cast<double>(series.steps[i])))
            << "\" cy=\"" << detail::svg_num(sy(series.gaps[i]))
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    }

    // Tick labels at the extremes.
    svg << "<text x=\"" << detail::svg_num(margin) << "\" y=\""
        << detail::svg_num(height - margin + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << series.steps.front() << "</text>\n";
    svg << "<text x=\"" << detail::svg_num(width - margin) << "\" y=\""
        << detail::svg_num(height - margin + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << series.steps.back() << "</text>\n";
    svg << "<text x=\"" << detail::svg_num(width / 2) << "\" y=\""
        << detail::svg_num(height - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">step</text>\n";
    svg << "<text x=\"14\" y=\"" << detail::svg_num(height / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 14 "
        << detail::svg_num(height / 2) << ")\">log PPL gap</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

// One polyline per model; classes on the x-axis ordered by the designated
// model's accuracy, ascending (ties broken by class name).
inline std::string plot_accuracy_comparison(
    const std::map<std::string, std::map<std::string, double>>& accuracies,
    const std::string& ordering_model) {
    if (accuracies.empty()) {
        throw ValidationError("plot_accuracy_comparison: no model series");
    }
    auto anchor = accuracies.find(ordering_model);
    if (anchor == accuracies.end()) {
        throw ValidationError("plot_accuracy_comparison: ordering model '" +
                              ordering_model + "' not present");
    }
    for (const auto& [model, by_class] : accuracies) {
        if (by_class.size() != anchor->second.size()) {
            throw ValidationError(
                "plot_accuracy_comparison: model '" + model +
                "' covers a different class set than '" + ordering_model +
                "'");
        }
        for (const auto& [cls, acc] : by_class) {
            if (!anchor->second.count(cls)) {
                throw ValidationError("plot_accuracy_comparison: class '" +
                                      cls + "' missing from '" +
                                      ordering_model + "'");
            }
            (void)acc;
        }
    }

    std::vector<std::string> order;
    order.reserve(anchor->second.size());
    for (const auto& [cls, acc] : anchor->second) {
        order.push_back(cls);
        (void)acc;
    }
    std::sort(order.begin(), order.end(),
              [&](const std::string& a, const std::string& b) {
                  const double ax = anchor->second.at(a);
                  const double bx = anchor->second.at(b);
                  if (ax != bx) {
                      return ax < bx;
                  }
                  return a < b;
              });

    const double width = 720.0;
    const double height = 400.0;
    const double margin = 48.0;
    const std::size_t n = order.size();
    detail::LinearScale sx{0.0, n > 1 ? static_cast<double>(n - 1) : 1.0,
                           margin, width - margin};
    detail::LinearScale sy{0.0, 100.0, height - margin, margin};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" "
           "height=\"400\" viewBox=\"0 0 720 400\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"400\" "
           "fill=\"#ffffff\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << detail::svg_num(margin) << "\" y1=\""
        << detail::svg_num(height - margin) << "\" x2=\""
        << detail::svg_num(width - margin) << "\" y2=\""
        << detail::svg_num(height - margin)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << detail::svg_num(margin) << "\" y1=\""
        << detail::svg_num(margin) << "\" x2=\"" << detail::svg_num(margin)
        << "\" y2=\"" << detail::svg_num(height - margin)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    const double y50 = sy(50.0);
    svg << "<line class=\"chance\" x1=\"" << detail::svg_num(margin)
        << "\" y1=\"" << detail::svg_num(y50) << "\" x2=\""
        << detail::svg_num(width - margin) << "\" y2=\""
        << detail::svg_num(y50)
        << "\" stroke=\"#999999\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 3\"/>\n";

    std::size_t model_idx = 0;
    for (const auto& [model, by_class] : accuracies) {
        const std::string& color =
            detail::palette()[model_idx % detail::palette().size()];
        svg << "<polyline class=\"model\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                svg << ' ';
            }
            svg << detail::svg_num(sx(static_cast<double>(i))) << ','
                << detail::svg_num(sy(by_class.at(order[i])));
        }
        svg << "\"/>\n";
        svg << "<text class=\"legend\" x=\"" << detail::svg_num(width - margin)
            << "\" y=\"" << detail::svg_num(margin + 16.0 * model_idx)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\" fill=\"" << color << "\">"
            << xml_escape(model) << "</text>\n";
        ++model_idx;
    }

    svg << "<text x=\"" << detail::svg_num(width / 2) << "\" y=\""
        << detail::svg_num(height - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">classes (ordered by "
        << xml_escape(ordering_model) << " accuracy)</text>\n";
    svg << "<text x=\"14\" y=\"" << detail::svg_num(height / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 14 "
        << detail::svg_num(height / 2) << ")\">accuracy %</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gaptrack

#endif  // GAPTRACK_SVG_HPP
