#include "doctest.h"

#include "hsrchan/fresnel.hpp"
#include "hsrchan/geometry.hpp"

#include <cmath>
#include <complex>

using namespace hsrchan;

namespace {

const double kF = 22.6e9;

Material lossless_eps4()
{
    Material m;
    m.name = "glass4";
    m.eps_r_real = 4.0;
    m.loss_tangent = 0.0;
    return m;
}

} // namespace

TEST_CASE("lossless dielectric closed forms")
{
    Material m = lossless_eps4();

    // normal incidence: r_te = (1-2)/(1+2), r_tm flips sign in this convention
    FresnelCoeffs n = fresnel_halfspace(m, 0.0, kF);
    CHECK(n.r_te.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(std::fabs(n.r_te.imag()) < 1e-15);
    CHECK(n.r_tm.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(n.t_te) == doctest::Approx(std::sqrt(8.0 / 9.0)).epsilon(1e-12));

    // 45 degrees, q2 = sqrt(3.5)
    FresnelCoeffs f = fresnel_halfspace(m, kPi / 4.0, kF);
    const double c = std::sqrt(0.5);
    const double q2 = std::sqrt(3.5);
    CHECK(f.r_te.real() == doctest::Approx((c - q2) / (c + q2)).epsilon(1e-12));
    CHECK(f.r_tm.real() == doctest::Approx((4.0 * c - q2) / (4.0 * c + q2)).epsilon(1e-12));
    CHECK(f.r_te.real() == doctest::Approx(-0.4514162).epsilon(1e-6));
    CHECK(f.r_tm.real() == doctest::Approx(0.2037766).epsilon(1e-6));

    // Brewster angle atan(sqrt(eps)) kills the TM reflection exactly
    FresnelCoeffs b = fresnel_halfspace(m, std::atan(2.0), kF);
    CHECK(std::abs(b.r_tm) < 1e-12);
    CHECK(std::abs(b.r_te) > 0.3);

    // grazing: both polarizations approach total reflection with a sign flip
    FresnelCoeffs g = fresnel_halfspace(m, 0.4999 * kPi, kF);
    CHECK(g.r_te.real() == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(g.r_tm.real() == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("angles outside [0, pi/2] clamp")
{
    Material m = lossless_eps4();
    CHECK(fresnel_halfspace(m, -0.3, kF).r_te == fresnel_halfspace(m, 0.0, kF).r_te);
    CHECK(fresnel_halfspace(m, 2.0, kF).r_tm == fresnel_halfspace(m, 0.5 * kPi, kF).r_tm);
}

TEST_CASE("passivity and energy split across the material table")
{
    for (const Material& m : builtin_materials()) {
        for (int i = 0; i <= 90; ++i) {
            const double theta = i * kPi / 180.0;
            FresnelCoeffs f = fresnel_halfspace(m, theta, kF);
            CHECK(std::abs(f.r_te) <= 1.0 + 1e-12);
            CHECK(std::abs(f.r_tm) <= 1.0 + 1e-12);
            CHECK(std::norm(f.t_te) + std::norm(f.r_te) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::norm(f.t_tm) + std::norm(f.r_tm) == doctest::Approx(1.0).epsilon(1e-12));
            // lossy branch: decay, not gain, inside the material
            CHECK(f.q2.imag() <= 1e-15);
        }
    }
}

TEST_CASE("metal reflects nearly everything")
{
    const Material& metal = find_material(builtin_materials(), "metal");
    for (int i = 0; i <= 89; ++i) {
        FresnelCoeffs f = fresnel_halfspace(metal, i * kPi / 180.0, kF);
        CHECK(std::abs(f.r_te) > 0.999);
        if (i <= 80)
            CHECK(std::abs(f.r_tm) > 0.99); // TM dips near its pseudo-Brewster close to grazing
    }
}

TEST_CASE("low-loss concrete shows a pseudo-Brewster dip")
{
    const Material& concrete = find_material(builtin_materials(), "concrete");
    const double brewster = std::atan(std::sqrt(concrete.eps_r_real));
    FresnelCoeffs at = fresnel_halfspace(concrete, brewster, kF);
    FresnelCoeffs norm_inc = fresnel_halfspace(concrete, 0.0, kF);
    CHECK(std::abs(at.r_tm) < 0.02);
    CHECK(std::abs(at.r_tm) < 0.1 * std::abs(norm_inc.r_tm));
}

TEST_CASE("te reflection strengthens away from normal")
{
    const Material& concrete = find_material(builtin_materials(), "concrete");
    double prev = std::abs(fresnel_halfspace(concrete, 0.0, kF).r_te);
    for (int i = 5; i <= 89; i += 5) {
        double cur = std::abs(fresnel_halfspace(concrete, i * kPi / 180.0, kF).r_te);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("transmission keeps the field phase of 1 + r")
{
    for (const Material& m : builtin_materials()) {
        FresnelCoeffs f = fresnel_halfspace(m, 0.3, kF);
        std::complex<double> ratio = f.t_te / (1.0 + f.r_te);
        CHECK(std::fabs(ratio.imag()) < 1e-12);
        CHECK(ratio.real() > 0.0);
    }
}

TEST_CASE("polarization selector matches the struct")
{
    const Material& brick = find_material(builtin_materials(), "brick");
    FresnelCoeffs f = fresnel_halfspace(brick, 0.7, kF);
    CHECK(reflection_coefficient(brick, 0.7, Polarization::te, kF) == f.r_te);
    CHECK(reflection_coefficient(brick, 0.7, Polarization::tm, kF) == f.r_tm);
}
