#include "hsrchan/fresnel.hpp"

#include "hsrchan/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hsrchan {

FresnelCoeffs fresnel_halfspace(const Material& m, double theta_rad, double /*frequency_hz*/) {
    const double theta = std::clamp(theta_rad, 0.0, 0.5 * kPi);
    const double q1 = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> eps = m.eps_r();
    // principal branch: Re >= 0, Im <= 0 for lossy media (e^{+jwt} convention)
    const std::complex<double> q2 = std::sqrt(eps - s * s);

    FresnelCoeffs f;
    f.q2 = q2;
    f.r_te = (q1 - q2) / (q1 + q2);
    f.r_tm = (eps * q1 - q2) / (eps * q1 + q2);

    auto power_consistent_t = [](const std::complex<double>& r) {
        const double mag = std::sqrt(std::max(0.0, 1.0 - std::norm(r)));
        const std::complex<double> field = 1.0 + r;
        const double a = std::abs(field);
        return a > 0.0 ? field * (mag / a) : std::complex<double>(mag, 0.0);
    };
    f.t_te = power_consistent_t(f.r_te);
    f.t_tm = power_consistent_t(f.r_tm);
    return f;
}

std::complex<double> reflection_coefficient(const Material& m, double theta_rad,
                                            Polarization pol, double frequency_hz) {
    const FresnelCoeffs f = fresnel_halfspace(m, theta_rad, frequency_hz);
    return pol == Polarization::te ? f.r_te : f.r_tm;
}

} // namespace hsrchan
