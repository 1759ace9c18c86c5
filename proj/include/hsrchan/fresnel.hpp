#pragma once

#include "hsrchan/material.hpp"

#include <complex>

namespace hsrchan {

/// Plane-wave coefficients at an air / lossy-dielectric interface.
/// TE (s): E perpendicular to the plane of incidence; TM (p): E in it.
/// Transmission amplitudes are power-consistent: |t|^2 = 1 - |r|^2, with the
/// interface phase of the field coefficient. q2 = sqrt(eps_r - sin^2 theta)
/// drives the in-material decay exp(-k0 |Im q2| depth).
struct FresnelCoeffs {
    std::complex<double> r_te, r_tm;
    std::complex<double> t_te, t_tm;
    std::complex<double> q2;
};

/// theta is the incidence angle from the surface normal, clamped to [0, pi/2].
FresnelCoeffs fresnel_halfspace(const Material& m, double theta_rad, double frequency_hz);

enum class Polarization { te, tm };

std::complex<double> reflection_coefficient(const Material& m, double theta_rad,
                                            Polarization pol, double frequency_hz);

} // namespace hsrchan
