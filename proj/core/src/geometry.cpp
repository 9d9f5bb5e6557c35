#include "countsim/geometry.hpp"

#include <stdexcept>
#include <string>

namespace countsim {

void GridGeometry::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("geometry: " + what); };

    if (columns != 11 || rows != 5) fail("grid must be 11 columns x 5 rows");
    if (ball_radius < 0) fail("ball_radius must be >= 0");
    if (cell_width() < 1 || cell_height() < 1) fail("image too small for an 11x5 grid");
    if (cell_width() * columns > image_width || cell_height() * rows > image_height)
        fail("cells exceed image bounds");
    // Discs of adjacent columns must not overlap. Non-touching (the stronger
    // condition the connected-component oracle needs) additionally requires
    // 2*ball_radius + 1 < cell_width, which the shipped geometries satisfy.
    if (2 * ball_radius >= cell_width()) fail("ball_radius too large for cell_width");
    // Disc extents: inside the image, and clear of the trigger row (pixel row 0).
    if (ball_center_y(rows - 1) - ball_radius < 1.0) fail("top row collides with trigger line row");
    if (ball_center_y(0) + ball_radius > image_height - 1) fail("bottom row leaves the image");
    if (ball_center_x(0) - ball_radius < 0.0 ||
        ball_center_x(columns - 1) + ball_radius > image_width - 1)
        fail("outer columns leave the image");
    if (image_width < trigger_line_length()) fail("image narrower than the trigger line");
}

GridGeometry default_geometry() {
    GridGeometry g;
    g.validate();
    return g;
}

GridGeometry tiny_geometry() {
    GridGeometry g;
    g.image_height = 8;
    g.image_width = 20;
    g.ball_radius = 0;
    g.validate();
    return g;
}

} // namespace countsim
