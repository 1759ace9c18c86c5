#pragma once

#include "hsrchan/material.hpp"

#include <complex>

namespace hsrchan {

/// Kouyoumjian-Pathak transition function
/// F(x) = 2j sqrt(x) e^{jx} integral_{sqrt(x)}^inf e^{-j t^2} dt, for x >= 0.
/// F(0) = 0, F -> 1 as x -> inf.
std::complex<double> transition_function(double x);

struct UtdCoeffs {
    std::complex<double> d_soft; // E parallel to the edge (TE w.r.t. the faces)
    std::complex<double> d_hard; // E perpendicular to the edge
};

/// Wedge diffraction coefficients with heuristic dielectric face reflection
/// terms. Angle convention: phi measured from face 0 through the exterior
/// region; the wedge spans the remaining 2*pi - n_wedge*pi.
///   k        free-space wave number
///   n_wedge  exterior angle / pi, in (1, 2]
///   beta0    angle between the incident ray and the edge, (0, pi)
///   phi_inc  incidence azimuth from face 0, (0, n_wedge*pi)
///   phi_obs  observation azimuth from face 0, (0, n_wedge*pi)
///   dist_L   distance parameter, e.g. s s'/(s+s') sin^2(beta0)
std::complex<double> cot_transition_term(double sigma, double beta, double n_wedge, double kL);

UtdCoeffs utd_coefficients(double k, double n_wedge, double beta0, double phi_inc, double phi_obs,
                           double dist_L, const Material& face0, const Material& face_n,
                           double frequency_hz);

} // namespace hsrchan
