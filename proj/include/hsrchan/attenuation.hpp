#pragma once

#include "hsrchan/raytracer.hpp"

namespace hsrchan {

enum class Weather { sunny, rainy };
enum class LinkClass { terrestrial, satellite };

/// Component values in dB; defaults are typical 22.6 GHz numbers for a ~0.6 km
/// terrestrial hop and a 45-degree GEO slant path.
struct AttenuationParams {
    double terrestrial_gas_db = 0.12;    // at the reference length, any weather
    double terrestrial_rain_db = 8.1074; // at the reference length, rainy only
    double reference_km = 0.6;           // maximum terrestrial link length
    double sat_gas_db = 0.7071;
    double sat_rain_db = 30.0162;
    double sat_cloud_db = 2.1677;
    double sat_scint_db = 0.7638;
};

struct AttenuationBudget {
    double a_gas = 0.0;
    double a_rain = 0.0;
    double a_cloud = 0.0;
    double a_scint = 0.0;
    LinkClass link_class = LinkClass::terrestrial;
    Weather weather = Weather::sunny;
};

/// Gas and rain components scale linearly with link length from their
/// reference-length values. Throws for lengths outside (0, reference].
double terrestrial_excess(const AttenuationParams& p, Weather w, double link_length_km);

AttenuationBudget satellite_components(const AttenuationParams& p, Weather w);

/// Slant-path combination: A_T = A_G + sqrt((A_R + A_C)^2 + A_S^2).
double combine_total(const AttenuationBudget& b);

/// Excess attenuation for one analysis case; terrestrial links use the
/// reference length (worst case along the track).
double case_excess_db(const AttenuationParams& p, LinkClass link_class, Weather w);

/// Uniform power shift of every path; ordering is preserved. excess must be >= 0.
MpcSet apply_excess(MpcSet set, double excess_db);

} // namespace hsrchan
