#include "covcal/report.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace covcal {

namespace {

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartPoint> line;
    std::optional<double> hline;        // horizontal reference (threshold)
    std::optional<ChartPoint> marker;   // highlighted point (selection)
};

std::string fmt(double v) { return format_csv_value(v); }

// Minimal single-series line chart; enough for the OVL / recall / timing
// figures without an imaging dependency.
std::string render_chart(const Chart& chart) {
    const double width = 640, height = 420;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!chart.line.empty()) {
        x_min = x_max = chart.line.front().x;
        y_min = y_max = chart.line.front().y;
        for (const ChartPoint& p : chart.line) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y);
            y_max = std::max(y_max, p.y);
        }
    }
    if (chart.hline) {
        y_min = std::min(y_min, *chart.hline);
        y_max = std::max(y_max, *chart.hline);
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;
    const double y_pad = (y_max - y_min) * 0.05;
    y_min -= y_pad;
    y_max += y_pad;

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
         fmt(height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + chart.title + "</text>\n";

    // Axes with 5 ticks per side.
    s += "<g stroke=\"#444\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) +
         "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
    s += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
         "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_min + (x_max - x_min) * t / 4.0;
        const double fy = y_min + (y_max - y_min) * t / 4.0;
        s += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(mt + ph + 16) +
             "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#222\">" + fmt(fx) +
             "</text>\n";
        s += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(py(fy) + 4) +
             "\" text-anchor=\"end\" stroke=\"none\" fill=\"#222\">" + fmt(fy) +
             "</text>\n";
    }
    s += "</g>\n";
    s += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         chart.x_label + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " + fmt(mt + ph / 2) + ")\">" + chart.y_label +
         "</text>\n";

    if (chart.hline) {
        s += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(py(*chart.hline)) + "\" x2=\"" +
             fmt(ml + pw) + "\" y2=\"" + fmt(py(*chart.hline)) +
             "\" stroke=\"#cc2222\" stroke-dasharray=\"6 4\"/>\n";
    }

    if (!chart.line.empty()) {
        std::string pts;
        for (const ChartPoint& p : chart.line)
            pts += fmt(px(p.x)) + "," + fmt(py(p.y)) + " ";
        s += "<polyline fill=\"none\" stroke=\"#2255cc\" stroke-width=\"2\" points=\"" +
             pts + "\"/>\n";
        for (const ChartPoint& p : chart.line)
            s += "<circle cx=\"" + fmt(px(p.x)) + "\" cy=\"" + fmt(py(p.y)) +
                 "\" r=\"3\" fill=\"#2255cc\"/>\n";
    }
    if (chart.marker) {
        s += "<circle cx=\"" + fmt(px(chart.marker->x)) + "\" cy=\"" +
             fmt(py(chart.marker->y)) +
             "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace

void write_ovl_svg(const CalibrationOutcome& outcome, const std::filesystem::path& path) {
    Chart chart;
    chart.title = "OVL vs patch radius (" + outcome.pair_name + ")";
    chart.x_label = "patch radius [px]";
    chart.y_label = "overlapping coefficient";
    for (const OvlPoint& p : outcome.curve.points)
        chart.line.push_back({static_cast<double>(p.radius), p.ovl});
    chart.hline = outcome.config.ovl_threshold;
    chart.marker = ChartPoint{outcome.selected_radius, outcome.config.ovl_threshold};
    write_text_file(render_chart(chart), path);
}

void write_recall_svg(const EvalReport& report, const std::filesystem::path& path) {
    Chart chart;
    chart.title = "Recall vs patch radius (" + report.pair_name + ")";
    chart.x_label = "patch radius [px]";
    chart.y_label = "recall";
    double selected_recall = 0.0;
    for (const RadiusEval& e : report.per_radius) {
        chart.line.push_back({static_cast<double>(e.radius), e.recall});
        if (e.radius == report.selected_radius_evaluated) selected_recall = e.recall;
    }
    chart.marker =
        ChartPoint{static_cast<double>(report.selected_radius_evaluated), selected_recall};
    write_text_file(render_chart(chart), path);
}

void write_metric_svg(const EvalReport& report, const std::filesystem::path& path) {
    Chart chart;
    chart.title = "Recall-to-compute efficiency (" + report.pair_name + ")";
    chart.x_label = "patch radius [px]";
    chart.y_label = "M";
    for (const RadiusEval& e : report.per_radius)
        chart.line.push_back({static_cast<double>(e.radius), e.m_metric});
    chart.marker = ChartPoint{static_cast<double>(report.selected_radius_evaluated),
                              report.m_at_selected};
    write_text_file(render_chart(chart), path);
}

void write_timing_svg(const std::vector<TimingRow>& rows,
                      const std::filesystem::path& path) {
    Chart chart;
    chart.title = "Mean localization time vs patch radius";
    chart.x_label = "patch radius [px]";
    chart.y_label = "seconds";
    for (const TimingRow& r : rows)
        chart.line.push_back({static_cast<double>(r.radius), r.mean_time_s});
    write_text_file(render_chart(chart), path);
}

}  // namespace covcal
