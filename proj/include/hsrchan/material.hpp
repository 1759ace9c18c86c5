#pragma once

#include <complex>
#include <string>
#include <vector>

namespace hsrchan {

/// Electromagnetic surface description at the operating band.
/// Scattering parameters follow the directive (single-lobe) model:
/// `scatter_coeff` is the fraction S of the incident field amplitude that is
/// scattered, `scatter_exponent` shapes the lobe around the specular direction.
struct Material {
    std::string name;
    double eps_r_real = 1.0;      // real part of relative permittivity
    double loss_tangent = 0.0;
    double scatter_coeff = 0.0;   // S
    double scatter_exponent = 1.0; // alpha_R

    /// Complex relative permittivity, e^{+j w t} convention.
    std::complex<double> eps_r() const { return {eps_r_real, -eps_r_real * loss_tangent}; }
};

/// Built-in material table used by the bundled scenario.
const std::vector<Material>& builtin_materials();

/// Case-insensitive lookup into a material list; throws std::invalid_argument
/// when the name is unknown.
const Material& find_material(const std::vector<Material>& table, const std::string& name);

} // namespace hsrchan
