#include "hsrchan/material.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace hsrchan {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

const std::vector<Material>& builtin_materials() {
    // Measured 22.6 GHz parameters for the surfaces present in the railway scene.
    // Metal is approximated as a near-perfect conductor via a huge loss tangent.
    static const std::vector<Material> table = {
        {"marble", 3.0045, 0.2828, 0.0022, 15.3747},
        {"toughened_glass", 1.0538, 23.9211, 0.0025, 5.5106},
        {"brick", 1.9155, 0.0568, 0.0019, 49.5724},
        {"metal", 1.0, 1e7, 0.0026, 17.7691},
        {"wood", 6.6, 0.9394, 0.0086, 13.1404},
        {"concrete", 5.4745, 0.0021, 0.0011, 109.0},
    };
    return table;
}

const Material& find_material(const std::vector<Material>& table, const std::string& name) {
    const std::string key = lower(name);
    for (const auto& m : table) {
        if (lower(m.name) == key) return m;
    }
    throw std::invalid_argument("unknown material: " + name);
}

} // namespace hsrchan
