#include "countsim/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace countsim::svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 62;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 38;
constexpr int kMarginBottom = 52;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Canvas {
    std::ofstream out;
    double x_min, x_max, y_min, y_max;

    Canvas(const std::filesystem::path& path, double xmin, double xmax, double ymin, double ymax)
        : out(path, std::ios::binary), x_min(xmin), x_max(xmax), y_min(ymin), y_max(ymax) {
        if (!out) throw std::runtime_error("cannot write svg: " + path.string());
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
            << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
        out << "<rect width='" << kWidth << "' height='" << kHeight << "' fill='white'/>\n";
    }

    double px(double x) const {
        const double span = x_max - x_min;
        return kMarginLeft + (span == 0.0 ? 0.5 : (x - x_min) / span) *
                                 (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        const double span = y_max - y_min;
        return kHeight - kMarginBottom - (span == 0.0 ? 0.5 : (y - y_min) / span) *
                                             (kHeight - kMarginTop - kMarginBottom);
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double width = 1.0) {
        out << "<line x1='" << num(x1) << "' y1='" << num(y1) << "' x2='" << num(x2) << "' y2='"
            << num(y2) << "' stroke='" << color << "' stroke-width='" << num(width) << "'/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 12,
              const std::string& anchor = "middle") {
        out << "<text x='" << num(x) << "' y='" << num(y) << "' font-size='" << size
            << "' font-family='sans-serif' text-anchor='" << anchor << "'>" << s << "</text>\n";
    }

    void axes(const std::string& title, const std::string& x_label, const std::string& y_label) {
        line(kMarginLeft, kMarginTop, kMarginLeft, kHeight - kMarginBottom, "black");
        line(kMarginLeft, kHeight - kMarginBottom, kWidth - kMarginRight, kHeight - kMarginBottom,
             "black");
        text(kWidth / 2.0, 22, title, 14);
        text(kWidth / 2.0, kHeight - 10, x_label);
        out << "<text x='16' y='" << num(kHeight / 2.0)
            << "' font-size='12' font-family='sans-serif' text-anchor='middle' "
               "transform='rotate(-90 16 "
            << num(kHeight / 2.0) << ")'>" << y_label << "</text>\n";
        for (int i = 0; i <= 5; ++i) {
            const double y = y_min + (y_max - y_min) * i / 5.0;
            line(kMarginLeft - 4, py(y), kMarginLeft, py(y), "black");
            text(kMarginLeft - 8, py(y) + 4, num(y), 10, "end");
            line(kMarginLeft, py(y), kWidth - kMarginRight, py(y), "#dddddd", 0.5);
        }
    }

    void finish() { out << "</svg>\n"; }
};

} // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      std::span<const Series> series, double y_min, double y_max) {
    double x_min = 0.0, x_max = 1.0;
    bool first = true;
    for (const Series& s : series)
        for (const auto& [x, _] : s.points) {
            if (first) {
                x_min = x_max = x;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
        }
    Canvas c(path, x_min, x_max, y_min, y_max);
    c.axes(title, x_label, y_label);
    for (int i = 0; i <= 4; ++i) {
        const double x = x_min + (x_max - x_min) * i / 4.0;
        c.text(c.px(x), kHeight - kMarginBottom + 16, num(x), 10);
    }
    double legend_y = kMarginTop + 6;
    for (const Series& s : series) {
        if (s.points.empty()) continue;
        c.out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : s.points) c.out << num(c.px(x)) << "," << num(c.py(y)) << " ";
        c.out << "'/>\n";
        c.line(kWidth - 170, legend_y, kWidth - 146, legend_y, s.color, 2.0);
        c.text(kWidth - 140, legend_y + 4, s.label, 11, "start");
        legend_y += 16;
    }
    c.finish();
}

void write_bar_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, std::span<const Bar> bars, double y_min,
                     double y_max) {
    Canvas c(path, 0.0, static_cast<double>(bars.size()), y_min, y_max);
    c.axes(title, "", y_label);
    const double slot = (kWidth - kMarginLeft - kMarginRight) / std::max<std::size_t>(1, bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const Bar& b = bars[i];
        const double x0 = kMarginLeft + slot * i + slot * 0.2;
        const double w = slot * 0.6;
        const double top = c.py(b.value);
        const double base = c.py(y_min);
        c.out << "<rect x='" << num(x0) << "' y='" << num(top) << "' width='" << num(w)
              << "' height='" << num(std::max(0.0, base - top)) << "' fill='" << b.color
              << "'/>\n";
        if (b.has_ci) {
            const double cx = x0 + w / 2.0;
            c.line(cx, c.py(b.ci_low), cx, c.py(b.ci_high), "black", 1.5);
            c.line(cx - 5, c.py(b.ci_low), cx + 5, c.py(b.ci_low), "black", 1.5);
            c.line(cx - 5, c.py(b.ci_high), cx + 5, c.py(b.ci_high), "black", 1.5);
        }
        c.text(x0 + w / 2.0, kHeight - kMarginBottom + 16, b.label, 11);
    }
    c.finish();
}

} // namespace countsim::svg
