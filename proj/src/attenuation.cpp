#include "hsrchan/attenuation.hpp"

#include <cmath>
#include <stdexcept>

namespace hsrchan {

double terrestrial_excess(const AttenuationParams& p, Weather w, double link_length_km) {
    if (!(link_length_km > 0.0)) throw std::invalid_argument("link length must be positive");
    if (link_length_km > p.reference_km + 1e-12)
        throw std::invalid_argument("link length exceeds the configured maximum");
    const double scale = link_length_km / p.reference_km;
    double total = p.terrestrial_gas_db * scale;
    if (w == Weather::rainy) total += p.terrestrial_rain_db * scale;
    return total;
}

AttenuationBudget satellite_components(const AttenuationParams& p, Weather w) {
    AttenuationBudget b;
    b.link_class = LinkClass::satellite;
    b.weather = w;
    b.a_gas = p.sat_gas_db;
    b.a_rain = w == Weather::rainy ? p.sat_rain_db : 0.0;
    b.a_cloud = p.sat_cloud_db;
    b.a_scint = p.sat_scint_db;
    return b;
}

double combine_total(const AttenuationBudget& b) {
    const double rc = b.a_rain + b.a_cloud;
    return b.a_gas + std::sqrt(rc * rc + b.a_scint * b.a_scint);
}

double case_excess_db(const AttenuationParams& p, LinkClass link_class, Weather w) {
    if (link_class == LinkClass::terrestrial) return terrestrial_excess(p, w, p.reference_km);
    return combine_total(satellite_components(p, w));
}

MpcSet apply_excess(MpcSet set, double excess_db) {
    if (excess_db < 0.0) throw std::invalid_argument("excess attenuation must be non-negative");
    for (auto& m : set.mpcs) m.power_dbm -= excess_db;
    return set;
}

} // namespace hsrchan
