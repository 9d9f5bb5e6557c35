#include "countsim/image.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace countsim {

void write_pgm(const Image& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(image.width));
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x)
            row[static_cast<std::size_t>(x)] =
                static_cast<unsigned char>(std::lround(image.at(y, x) * 255.0));
        out.write(reinterpret_cast<const char*>(row.data()), image.width);
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::uint64_t image_hash(const Image& image) {
    // FNV-1a over the raw pixel bytes.
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    mix_bytes(&image.height, sizeof(image.height));
    mix_bytes(&image.width, sizeof(image.width));
    mix_bytes(image.pixels.data(), image.pixels.size() * sizeof(double));
    return h;
}

} // namespace countsim
