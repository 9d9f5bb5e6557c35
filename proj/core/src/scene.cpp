#include "countsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace countsim {

namespace {

constexpr double kHandValue = 0.5;

void fill_disc(Image& img, double cx, double cy, int radius) {
    const double r2 = static_cast<double>(radius) * radius;
    const int y_lo = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int y_hi = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius)));
    const int x_lo = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int x_hi = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius)));
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r2) img.at(y, x) = 1.0;
        }
}

void fill_rect(Image& img, double x0, double x1, double y0, double y1, double value) {
    const int iy0 = std::max(0, static_cast<int>(std::ceil(y0)));
    const int iy1 = std::min(img.height - 1, static_cast<int>(std::floor(y1)));
    const int ix0 = std::max(0, static_cast<int>(std::ceil(x0)));
    const int ix1 = std::min(img.width - 1, static_cast<int>(std::floor(x1)));
    for (int y = iy0; y <= iy1; ++y)
        for (int x = ix0; x <= ix1; ++x) img.at(y, x) = value;
}

void fill_triangle(Image& img, double ax, double ay, double bx, double by, double cx, double cy,
                   double value) {
    const int y_lo = std::max(0, static_cast<int>(std::floor(std::min({ay, by, cy}))));
    const int y_hi = std::min(img.height - 1, static_cast<int>(std::ceil(std::max({ay, by, cy}))));
    const int x_lo = std::max(0, static_cast<int>(std::floor(std::min({ax, bx, cx}))));
    const int x_hi = std::min(img.width - 1, static_cast<int>(std::ceil(std::max({ax, bx, cx}))));
    auto cross = [](double ox, double oy, double px, double py, double qx, double qy) {
        return (px - ox) * (qy - oy) - (py - oy) * (qx - ox);
    };
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x) {
            const double d1 = cross(ax, ay, bx, by, x, y);
            const double d2 = cross(bx, by, cx, cy, x, y);
            const double d3 = cross(cx, cy, ax, ay, x, y);
            const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
            const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
            if (!(has_neg && has_pos)) img.at(y, x) = value;
        }
}

} // namespace

Scene Scene::make(std::vector<Ball> balls, bool visual_trigger, std::optional<int> hand) {
    Scene s;
    std::sort(balls.begin(), balls.end());
    s.balls = std::move(balls);
    s.visual_trigger = visual_trigger;
    s.hand = hand;
    s.validate();
    return s;
}

std::vector<int> Scene::columns_left_to_right() const {
    std::vector<int> cols;
    cols.reserve(balls.size());
    for (const Ball& b : balls) cols.push_back(b.column);
    std::sort(cols.begin(), cols.end());
    return cols;
}

void Scene::validate() const {
    if (balls.size() > 10) throw std::invalid_argument("scene: more than 10 balls");
    for (const Ball& b : balls) {
        if (b.column < 0 || b.column > 10)
            throw std::invalid_argument("scene: ball column out of range");
        if (b.row < 0 || b.row > 4) throw std::invalid_argument("scene: ball row out of range");
    }
    for (std::size_t i = 1; i < balls.size(); ++i)
        if (balls[i].column == balls[i - 1].column)
            throw std::invalid_argument("scene: two balls share a column");
    if (hand && (*hand < 0 || *hand > 10))
        throw std::invalid_argument("scene: hand column out of range");
}

Image render(const Scene& scene, const GridGeometry& geometry) {
    scene.validate();
    Image img(geometry.image_height, geometry.image_width);
    for (const Ball& b : scene.balls)
        fill_disc(img, geometry.ball_center_x(b.column), geometry.ball_center_y(b.row),
                  geometry.ball_radius);
    if (scene.visual_trigger)
        for (int x = geometry.image_width - geometry.trigger_line_length();
             x < geometry.image_width; ++x)
            img.at(0, x) = 1.0;
    if (scene.hand) {
        const Image sprite = hand_sprite(*scene.hand, geometry);
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            if (sprite.pixels[i] > 0.0) img.pixels[i] = sprite.pixels[i];
    }
    return img;
}

Image hand_sprite(int column, const GridGeometry& geometry) {
    if (column < 0 || column > 10) throw std::invalid_argument("hand_sprite: column out of range");
    Image img(geometry.image_height, geometry.image_width);

    const double tip_x = geometry.ball_center_x(column);
    const double tip_y = geometry.image_height - 1.0 - geometry.margin_y() - geometry.cell_height();
    const double base_y = geometry.image_height - 1.0;
    const double tilt_deg = -30.0 + 6.0 * column;
    const double tilt = tilt_deg * std::numbers::pi / 180.0;
    const double base_x = tip_x - (base_y - tip_y) * std::tan(tilt);

    const double palm_w = std::max(3.0, 0.75 * geometry.cell_width());
    const double palm_h = std::max(2.0, 0.5 * geometry.cell_height());
    const double finger_hw = std::max(1.0, geometry.cell_width() / 6.0);
    const double palm_top = base_y - palm_h;

    fill_triangle(img, tip_x, tip_y, base_x - finger_hw, palm_top, base_x + finger_hw, palm_top,
                  kHandValue);
    fill_rect(img, base_x - palm_w / 2.0, base_x + palm_w / 2.0, palm_top, base_y, kHandValue);
    return img;
}

Scene random_scene(int numerosity, Rng& rng) { return random_scene_rows(numerosity, 0, 4, rng); }

Scene random_scene_rows(int numerosity, int row_lo, int row_hi, Rng& rng) {
    if (numerosity < 0 || numerosity > 10)
        throw std::invalid_argument("random_scene: numerosity out of range");
    if (row_lo < 0 || row_hi > 4 || row_lo > row_hi)
        throw std::invalid_argument("random_scene: bad row band");
    const std::vector<int> cols = rng.sample_distinct(numerosity, 11);
    std::vector<Ball> balls;
    balls.reserve(static_cast<std::size_t>(numerosity));
    for (int c : cols) balls.push_back(Ball{c, row_lo + rng.below(row_hi - row_lo + 1)});
    return Scene::make(std::move(balls));
}

std::uint64_t scene_hash(const Scene& scene) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ull;
    };
    for (const Ball& b : scene.balls) mix(static_cast<std::uint64_t>(b.column * 16 + b.row + 1));
    mix(scene.visual_trigger ? 2u : 3u);
    mix(scene.hand ? static_cast<std::uint64_t>(*scene.hand + 5) : 4u);
    return h;
}

} // namespace countsim
