#include "hsrchan/interference.hpp"

#include <cmath>
#include <stdexcept>

namespace hsrchan {

double sir(double p_signal_dbm, double p_interference_dbm)
{
    return p_signal_dbm - p_interference_dbm;
}

SirSeries sir_series(const std::vector<double>& p_signal_dbm,
                     const std::vector<double>& p_interference_dbm)
{
    if (p_signal_dbm.size() != p_interference_dbm.size())
        throw std::invalid_argument("sir_series: length mismatch");
    SirSeries out;
    out.values_db.reserve(p_signal_dbm.size());
    for (std::size_t i = 0; i < p_signal_dbm.size(); ++i)
        out.values_db.push_back(sir(p_signal_dbm[i], p_interference_dbm[i]));
    return out;
}

double coverage_probability(const SirSeries& s, double threshold_db,
                            std::size_t* excluded_count)
{
    if (s.values_db.empty())
        throw std::invalid_argument("coverage_probability: empty series");
    std::size_t covered = 0, finite = 0, excluded = 0;
    for (double v : s.values_db) {
        if (!std::isfinite(v)) {
            ++excluded;
            continue;
        }
        ++finite;
        if (v > threshold_db)
            ++covered;
    }
    if (excluded_count)
        *excluded_count = excluded;
    if (finite == 0)
        throw std::invalid_argument("coverage_probability: no finite samples");
    return static_cast<double>(covered) / static_cast<double>(finite);
}

std::vector<double> weather_delta(const SirSeries& rainy, const SirSeries& sunny)
{
    if (rainy.values_db.size() != sunny.values_db.size())
        throw std::invalid_argument("weather_delta: length mismatch");
    std::vector<double> out;
    out.reserve(rainy.values_db.size());
    for (std::size_t i = 0; i < rainy.values_db.size(); ++i)
        out.push_back(rainy.values_db[i] - sunny.values_db[i]);
    return out;
}

} // namespace hsrchan
