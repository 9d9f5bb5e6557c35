#include "countsim/posture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace countsim {

double posture_distance(const Posture& a, const Posture& b) {
    double sum = 0.0;
    for (int j = 0; j < kJointCount; ++j) {
        const double d = a.joints[static_cast<std::size_t>(j)] - b.joints[static_cast<std::size_t>(j)];
        sum += d * d;
    }
    return std::sqrt(sum);
}

PostureTable PostureTable::make(const PostureSynthesis& synthesis) {
    PostureTable table;
    table.base_.joints.fill(synthesis.base_value);
    for (int c = 0; c < kColumnCount; ++c) {
        for (int j = 0; j < kJointCount; ++j) {
            const double center = (j + 0.5) / kJointCount;
            const double gate = 1.0 / (1.0 + std::exp(-(c / 10.0 - center) / synthesis.width));
            const double v = synthesis.offsets[static_cast<std::size_t>(j)] +
                             synthesis.spans[static_cast<std::size_t>(j)] * gate;
            table.pointing_[static_cast<std::size_t>(c)].joints[static_cast<std::size_t>(j)] =
                std::clamp(v, 0.0, 1.0);
        }
    }

    if (synthesis.base_value < 0.0 || synthesis.base_value > 1.0)
        throw std::invalid_argument("posture table: base value outside [0,1]");
    if (!(synthesis.width > 0.0))
        throw std::invalid_argument("posture table: width must be positive");
    if (table.min_pairwise_distance() < 0.05)
        throw std::invalid_argument("posture table: min pairwise distance below 0.05");
    // Each entry must be its own nearest neighbor.
    for (int id = kBasePostureId; id < kColumnCount; ++id)
        if (snap_posture(table.by_id(id), table) != id)
            throw std::invalid_argument("posture table: ambiguous nearest-neighbor lookup");
    return table;
}

double PostureTable::min_pairwise_distance() const {
    double best = posture_distance(base_, pointing_[0]);
    for (int a = kBasePostureId; a < kColumnCount; ++a)
        for (int b = a + 1; b < kColumnCount; ++b)
            best = std::min(best, posture_distance(by_id(a), by_id(b)));
    return best;
}

Posture posture_for_column(int column, const PostureTable& table) {
    if (column < 0 || column >= kColumnCount)
        throw std::invalid_argument("posture_for_column: column out of range");
    return table.pointing(column);
}

int snap_posture(const Posture& p, const PostureTable& table) {
    int best_id = kBasePostureId;
    double best = posture_distance(p, table.base());
    for (int c = 0; c < kColumnCount; ++c) {
        const double d = posture_distance(p, table.pointing(c));
        if (d < best) { // ties keep the earlier entry: base first, then low columns
            best = d;
            best_id = c;
        }
    }
    return best_id;
}

} // namespace countsim
