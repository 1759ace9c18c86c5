#pragma once

#include "hsrchan/geometry.hpp"

namespace hsrchan {

enum class PointingMode {
    fixed,        // boresight frozen at scenario start
    track_target, // boresight re-aimed at the link partner every snapshot
};

/// Parametric single-lobe pattern: G(theta) = max_gain - 12 (theta/bw)^2 dBi,
/// clipped below at a sidelobe floor. bw is the full 3 dB beamwidth.
struct AntennaPattern {
    double max_gain_dbi = 0.0;
    double beamwidth_deg = 65.0;
    double sidelobe_floor_dbi = -30.0;
};

/// Gain toward `dir` for a pattern aimed along `boresight`. Both directions are
/// taken from the antenna location; neither needs to be normalized.
double pattern_gain_dbi(const AntennaPattern& p, const Vec3& boresight, const Vec3& dir);

/// Off-axis angle between two directions, degrees in [0, 180].
double off_axis_deg(const Vec3& boresight, const Vec3& dir);

} // namespace hsrchan
