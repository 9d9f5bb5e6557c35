#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "countsim/geometry.hpp"
#include "countsim/image.hpp"
#include "countsim/rng.hpp"

namespace countsim {

struct Ball {
    int column = 0; // 0..10
    int row = 0;    // 0..4, row 0 nearest the hand

    auto operator<=>(const Ball&) const = default;
};

// Symbolic description of a board state. Balls never share a column, so they
// never cover one another and pointing never repeats a place.
struct Scene {
    std::vector<Ball> balls; // kept sorted by column
    bool visual_trigger = false;
    std::optional<int> hand; // pointing column of a composited hand sprite

    static Scene make(std::vector<Ball> balls, bool visual_trigger = false,
                      std::optional<int> hand = std::nullopt);

    int numerosity() const { return static_cast<int>(balls.size()); }

    // Ball columns in left-to-right order (the counting/pointing order).
    std::vector<int> columns_left_to_right() const;

    // Throws std::invalid_argument on duplicate columns or out-of-range fields.
    void validate() const;

    bool operator==(const Scene&) const = default;
};

// Rasterizes balls (value 1.0), the trigger line (rightmost 8 pixels of row 0,
// value 1.0) and, if present, the hand sprite composited on top. Pure: the
// same scene yields a bit-identical buffer.
Image render(const Scene& scene, const GridGeometry& geometry);

// Hand pointing at `column`: a filled triangle (finger) over a rectangle
// (palm), anchored at the bottom edge, tip reaching the lowest row's band.
// Tilt varies linearly from -30 deg (column 0) to +30 deg (column 10), value
// 0.8 inside the footprint, 0 elsewhere.
Image hand_sprite(int column, const GridGeometry& geometry);

// Scene with exactly `numerosity` balls: columns drawn without replacement,
// rows uniform. Optional row band restricts the rows drawn (used by the
// distance analysis test sets).
Scene random_scene(int numerosity, Rng& rng);
Scene random_scene_rows(int numerosity, int row_lo, int row_hi, Rng& rng);

std::uint64_t scene_hash(const Scene& scene);

} // namespace countsim
