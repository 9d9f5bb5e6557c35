#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace countsim {

// Row-major grayscale buffer, values in [0,1]. Pixel (0,0) is the top-left.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, 0.0) {}

    double& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const Image&) const = default;
};

// Binary portable graymap (P5, maxval 255); pixel byte = round(value * 255).
void write_pgm(const Image& image, const std::filesystem::path& path);

std::uint64_t image_hash(const Image& image);

} // namespace countsim
