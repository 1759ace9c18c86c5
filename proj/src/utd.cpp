#include "hsrchan/utd.hpp"

#include "hsrchan/fresnel.hpp"
#include "hsrchan/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hsrchan {

namespace {

using cd = std::complex<double>;
const cd J{0.0, 1.0};

// Fresnel integrals C(s) = int_0^s cos(pi t^2 / 2) dt, S likewise with sin.
// Power series; converges quickly for the s <= 1.9 range used here.
void fresnel_cs(double s, double& c_out, double& s_out) {
    const double u = 0.5 * kPi * s * s;
    const double u2 = u * u;
    double c = 0.0, sv = 0.0;
    double term_c = s;        // k = 0 term of C: s
    double term_s = s * u;    // k = 0 term of S before /3
    for (int k = 0; k < 60; ++k) {
        const double c_add = term_c / (4.0 * k + 1.0);
        const double s_add = term_s / (4.0 * k + 3.0);
        c += c_add;
        sv += s_add;
        if (std::abs(c_add) < 1e-17 && std::abs(s_add) < 1e-17) break;
        term_c *= -u2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        term_s *= -u2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    c_out = c;
    s_out = sv;
}

} // namespace

std::complex<double> transition_function(double x) {
    if (x <= 0.0) return {0.0, 0.0};
    if (x < 0.3) {
        // small-argument expansion
        const cd e_p = std::exp(J * (kPi / 4.0));
        const cd e_m = std::exp(-J * (kPi / 4.0));
        const cd bracket = std::sqrt(kPi * x) - 2.0 * x * e_p - (2.0 / 3.0) * x * x * e_m;
        return bracket * std::exp(J * (kPi / 4.0 + x));
    }
    if (x >= 5.5) {
        const double ix = 1.0 / x;
        return 1.0 + J * (0.5 * ix) - 0.75 * ix * ix - J * (15.0 / 8.0) * ix * ix * ix +
               (75.0 / 16.0) * ix * ix * ix * ix;
    }
    const double s = std::sqrt(2.0 * x / kPi);
    double C, S;
    fresnel_cs(s, C, S);
    const cd tail = std::sqrt(kPi / 2.0) * cd{0.5 - C, -(0.5 - S)};
    return 2.0 * J * std::sqrt(x) * std::exp(J * x) * tail;
}

std::complex<double> cot_transition_term(double sigma, double beta, double n_wedge, double kL) {
    const double num = kPi + sigma * beta;
    const double m = std::round(num / (2.0 * kPi * n_wedge));
    const double delta = num - 2.0 * kPi * n_wedge * m;

    if (std::abs(delta) < 1e-4) {
        // cot pole against F zero; matched limit keeps the product finite and
        // supplies the half-plane jump that cancels the blocked direct field.
        // Expanding cot and F about either pole family gives the same form in
        // delta, for both signs of sigma.
        const cd e_p = std::exp(J * (kPi / 4.0));
        const double sgn = (delta >= 0.0) ? 1.0 : -1.0;
        return n_wedge * e_p * (std::sqrt(2.0 * kPi * kL) * sgn - 2.0 * kL * delta * e_p);
    }

    const double big_n = sigma * m;
    const double half = 0.5 * (2.0 * kPi * n_wedge * big_n - beta);
    const double a = 2.0 * std::cos(half) * std::cos(half);
    const double x = num / (2.0 * n_wedge);
    const double cot = std::cos(x) / std::sin(x);
    return cot * transition_function(kL * a);
}

UtdCoeffs utd_coefficients(double k, double n_wedge, double beta0, double phi_inc, double phi_obs,
                           double dist_L, const Material& face0, const Material& face_n,
                           double frequency_hz) {
    UtdCoeffs out{{0.0, 0.0}, {0.0, 0.0}};
    const double sin_b = std::sin(beta0);
    if (sin_b < 1e-9 || dist_L <= 0.0 || k <= 0.0) return out;

    const double kL = k * dist_L;
    const double bm = phi_obs - phi_inc;
    const double bp = phi_obs + phi_inc;

    const cd t1 = cot_transition_term(+1.0, bm, n_wedge, kL);
    const cd t2 = cot_transition_term(-1.0, bm, n_wedge, kL);
    const cd t3 = cot_transition_term(-1.0, bp, n_wedge, kL);
    const cd t4 = cot_transition_term(+1.0, bp, n_wedge, kL);

    // heuristic face reflection: face 0 at grazing angle phi_inc, face n at
    // n*pi - phi_obs, folded so both poles tend to -1 toward grazing
    auto grazing = [](double ang) {
        double g = ang;
        if (g > kPi) g = 0.0; // source behind the face plane: grazing limit
        else if (g > 0.5 * kPi) g = kPi - g;
        return std::clamp(g, 0.0, 0.5 * kPi);
    };
    const double theta0 = 0.5 * kPi - grazing(phi_inc);
    const double theta_n = 0.5 * kPi - grazing(n_wedge * kPi - phi_obs);
    const FresnelCoeffs f0 = fresnel_halfspace(face0, theta0, frequency_hz);
    const FresnelCoeffs fn = fresnel_halfspace(face_n, theta_n, frequency_hz);

    const cd front = -std::exp(-J * (kPi / 4.0)) / (2.0 * n_wedge * std::sqrt(2.0 * kPi * k) * sin_b);
    out.d_soft = front * (t1 + t2 + f0.r_te * t3 + fn.r_te * t4);
    out.d_hard = front * (t1 + t2 + f0.r_tm * t3 + fn.r_tm * t4);
    return out;
}

} // namespace hsrchan
