#pragma once

namespace countsim {

// The 11x5 placement grid mapped onto the camera image. Row 0 is the lowest
// row (bottom of the image, nearest the hand); pixel row 0 is the top of the
// image, which the trigger line occupies.
struct GridGeometry {
    int columns = 11;
    int rows = 5;
    int image_height = 40;
    int image_width = 134;
    int ball_radius = 3;

    int cell_width() const { return image_width / columns; }
    int cell_height() const { return image_height / rows; }
    int margin_x() const { return (image_width - cell_width() * columns) / 2; }
    int margin_y() const { return (image_height - cell_height() * rows) / 2; }

    double ball_center_x(int column) const {
        return margin_x() + (column + 0.5) * cell_width();
    }
    double ball_center_y(int row) const {
        return image_height - margin_y() - (row + 0.5) * cell_height();
    }

    // Horizontal band [lo, hi) of a column.
    double column_band_lo(int column) const { return margin_x() + column * cell_width(); }
    double column_band_hi(int column) const { return margin_x() + (column + 1) * cell_width(); }

    int trigger_line_length() const { return 8; }

    // Throws std::invalid_argument when the layout cannot host the grid.
    void validate() const;

    bool operator==(const GridGeometry&) const = default;
};

// The paper's full-scale camera geometry and the small configuration used by
// the gradient-check suites.
GridGeometry default_geometry();
GridGeometry tiny_geometry(); // 8x20, radius 0

} // namespace countsim
