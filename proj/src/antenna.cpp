#include "hsrchan/antenna.hpp"

#include <algorithm>
#include <cmath>

namespace hsrchan {

double off_axis_deg(const Vec3& boresight, const Vec3& dir) {
    const double nb = norm(boresight);
    const double nd = norm(dir);
    if (nb == 0.0 || nd == 0.0) return 0.0;
    const double c = std::clamp(dot(boresight, dir) / (nb * nd), -1.0, 1.0);
    return rad2deg(std::acos(c));
}

double pattern_gain_dbi(const AntennaPattern& p, const Vec3& boresight, const Vec3& dir) {
    const double theta = off_axis_deg(boresight, dir);
    const double g = p.max_gain_dbi - 12.0 * (theta / p.beamwidth_deg) * (theta / p.beamwidth_deg);
    return std::max(g, p.sidelobe_floor_dbi);
}

} // namespace hsrchan
