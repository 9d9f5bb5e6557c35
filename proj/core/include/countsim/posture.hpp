#pragma once

#include <array>
#include <cstdint>

namespace countsim {

inline constexpr int kJointCount = 7;
inline constexpr int kColumnCount = 11;

// Identity of a canonical posture: a pointing column, or the base (arm down)
// position.
inline constexpr int kBasePostureId = -1;

// Seven arm-joint values, each normalized into [0,1].
struct Posture {
    std::array<double, kJointCount> joints{};

    bool operator==(const Posture&) const = default;
};

double posture_distance(const Posture& a, const Posture& b);

// Per-joint smooth monotone maps used to synthesize the canonical pointing
// postures; stands in for the recorded robot joint angles, which are not
// published. Each joint sweeps its range around its own threshold column:
//   joint j of column c = offset[j] + span[j] * logistic((c/10 - center_j) / width)
// with center_j = (j + 0.5) / 7. Adjacent columns then differ strongly in the
// joint whose threshold falls between them, keeping all 11 postures well
// separated under nearest-neighbor lookup.
struct PostureSynthesis {
    double base_value = 0.1;
    std::array<double, kJointCount> offsets{0.10, 0.90, 0.10, 0.12, 0.88, 0.10, 0.15};
    std::array<double, kJointCount> spans{0.80, -0.80, 0.80, 0.76, -0.76, 0.80, 0.70};
    double width = 0.04;
};

// The 11 canonical pointing postures plus the base posture. Construction
// validates the table invariants: pairwise distances >= 0.05 and unambiguous
// nearest-neighbor lookup.
class PostureTable {
public:
    static PostureTable make(const PostureSynthesis& synthesis = {});

    const Posture& pointing(int column) const { return pointing_[static_cast<std::size_t>(column)]; }
    const Posture& base() const { return base_; }

    // id: kBasePostureId or a column index.
    const Posture& by_id(int id) const { return id == kBasePostureId ? base_ : pointing(id); }

    double min_pairwise_distance() const;

private:
    std::array<Posture, kColumnCount> pointing_{};
    Posture base_{};
};

Posture posture_for_column(int column, const PostureTable& table);

// Nearest entry of {pointing[0..10], base} under Euclidean distance. Ties
// break toward base, then toward the lowest column index.
int snap_posture(const Posture& p, const PostureTable& table);

} // namespace countsim
