#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace countsim::svg {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points; // (x, y)
};

struct Bar {
    std::string label;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool has_ci = false;
    std::string color = "#4878d0";
};

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      std::span<const Series> series, double y_min = 0.0, double y_max = 1.0);

void write_bar_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, std::span<const Bar> bars, double y_min = 0.0,
                     double y_max = 1.0);

} // namespace countsim::svg
