#include "jtac/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jtac::cli {

namespace {

const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                         "#9467bd", "#8c564b", "#e377c2"};

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

} // namespace

std::string format_svg_plot(const experiment_config& cfg, const std::vector<sweep_row>& rows,
                            const svg_style& style, bool nats) {
    const int W = style.width, H = style.height;
    const int left = 70, right = 150, top = 42, bottom = 52;
    const double px0 = left, px1 = W - right;
    const double py0 = H - bottom, py1 = top;  // y axis grows upward

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
    for (const auto& row : rows) {
        x_min = std::min(x_min, row.sweep_value);
        x_max = std::max(x_max, row.sweep_value);
        for (const auto& kv : row.values) {
            double v = nats ? kv.second.nats : kv.second.bits();
            if (std::isfinite(v)) {
                y_min = std::min(y_min, v);
                y_max = std::max(y_max, v);
            }
        }
    }
    bool have_data = std::isfinite(y_min) && std::isfinite(y_max);
    if (!have_data) { y_min = 0.0; y_max = 1.0; }
    if (x_min >= x_max) { x_min -= 0.5; x_max += 0.5; }
    double pad = 0.05 * (y_max - y_min);
    if (pad == 0.0) pad = 0.5;
    y_min -= pad;
    y_max += pad;

    auto sx = [&](double x) { return px0 + (x - x_min) / (x_max - x_min) * (px1 - px0); };
    auto sy = [&](double y) { return py0 + (y - y_min) / (y_max - y_min) * (py1 - py0); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
           "\" height=\"" + std::to_string(H) + "\" viewBox=\"0 0 " + std::to_string(W) +
           " " + std::to_string(H) + "\">\n";
    out += "<rect width=\"" + std::to_string(W) + "\" height=\"" + std::to_string(H) +
           "\" fill=\"white\"/>\n";
    std::string title = style.title.empty() ? cfg.name : style.title;
    out += "<text x=\"" + fmt2(0.5 * W) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + xml_escape(title) + "</text>\n";

    // axes
    out += "<line x1=\"" + fmt2(px0) + "\" y1=\"" + fmt2(py0) + "\" x2=\"" + fmt2(px1) +
           "\" y2=\"" + fmt2(py0) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + fmt2(px0) + "\" y1=\"" + fmt2(py0) + "\" x2=\"" + fmt2(px0) +
           "\" y2=\"" + fmt2(py1) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        double xv = x_min + t * (x_max - x_min) / 4.0;
        double yv = y_min + t * (y_max - y_min) / 4.0;
        out += "<line x1=\"" + fmt2(sx(xv)) + "\" y1=\"" + fmt2(py0) + "\" x2=\"" +
               fmt2(sx(xv)) + "\" y2=\"" + fmt2(py0 + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt2(sx(xv)) + "\" y=\"" + fmt2(py0 + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_tick(xv) + "</text>\n";
        out += "<line x1=\"" + fmt2(px0 - 5) + "\" y1=\"" + fmt2(sy(yv)) + "\" x2=\"" +
               fmt2(px0) + "\" y2=\"" + fmt2(sy(yv)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt2(px0 - 8) + "\" y=\"" + fmt2(sy(yv) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt_tick(yv) + "</text>\n";
    }
    out += "<text x=\"" + fmt2(0.5 * (px0 + px1)) + "\" y=\"" + fmt2(H - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(sweep_variable_name(cfg.sweep_var)) + "</text>\n";
    std::string ylab = style.y_label.empty()
                           ? (nats ? std::string("rate [nats]") : std::string("rate [bits]"))
                           : style.y_label;
    out += "<text x=\"16\" y=\"" + fmt2(0.5 * (py0 + py1)) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " + fmt2(0.5 * (py0 + py1)) + ")\">" +
           xml_escape(ylab) + "</text>\n";

    int color_idx = 0;
    double legend_y = top + 8;
    for (method mth : cfg.methods) {
        const char* color = palette[color_idx % 7];
        ++color_idx;
        // polyline segments, split where a method has no value
        std::vector<std::pair<double, double>> seg;
        auto flush = [&]() {
            if (seg.size() >= 2) {
                out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                       "\" stroke-width=\"1.8\" points=\"";
                for (size_t t = 0; t < seg.size(); ++t) {
                    if (t) out += " ";
                    out += fmt2(seg[t].first) + "," + fmt2(seg[t].second);
                }
                out += "\"/>\n";
            } else if (seg.size() == 1) {
                out += "<circle cx=\"" + fmt2(seg[0].first) + "\" cy=\"" +
                       fmt2(seg[0].second) + "\" r=\"2.5\" fill=\"" + std::string(color) +
                       "\"/>\n";
            }
            seg.clear();
        };
        for (const auto& row : rows) {
            auto it = row.values.find(mth);
            if (it == row.values.end()) {
                flush();
                continue;
            }
            double v = nats ? it->second.nats : it->second.bits();
            if (!std::isfinite(v)) {
                flush();
                continue;
            }
            seg.emplace_back(sx(row.sweep_value), sy(v));
        }
        flush();
        // legend row
        out += "<line x1=\"" + fmt2(px1 + 12.0) + "\" y1=\"" + fmt2(legend_y) + "\" x2=\"" +
               fmt2(px1 + 34.0) + "\" y2=\"" + fmt2(legend_y) + "\" stroke=\"" +
               std::string(color) + "\" stroke-width=\"1.8\"/>\n";
        out += "<text x=\"" + fmt2(px1 + 40.0) + "\" y=\"" + fmt2(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               xml_escape(method_name(mth)) + "</text>\n";
        legend_y += 18;
    }
    if (!have_data)
        out += "<text x=\"" + fmt2(0.5 * (px0 + px1)) + "\" y=\"" +
               fmt2(0.5 * (py0 + py1)) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
               "no finite values</text>\n";
    out += "</svg>\n";
    return out;
}

void emit_svg_plot(const experiment_config& cfg, const std::vector<sweep_row>& rows,
                   const svg_style& style, const std::string& path, bool nats) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_svg_plot: cannot open '" + path + "' for writing");
    f << format_svg_plot(cfg, rows, style, nats);
    f.close();
    if (!f) throw std::runtime_error("emit_svg_plot: write failed for '" + path + "'");
}

} // namespace jtac::cli
