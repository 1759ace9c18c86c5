#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hsrchan {

/// Per-snapshot signal-to-interference ratios for one (signal, interferer)
/// link pairing. Both runs must share trajectory sampling and weather.
struct SirSeries {
    std::string signal_case;
    std::string interference_case;
    std::vector<double> values_db;
};

/// p_signal - p_interference; infinities propagate (absent interferer -> +inf,
/// absent signal -> -inf).
double sir(double p_signal_dbm, double p_interference_dbm);

/// Element-wise SIR over two equal-length total-power series.
/// Throws on length mismatch.
SirSeries sir_series(const std::vector<double>& p_signal_dbm,
                     const std::vector<double>& p_interference_dbm);

/// Fraction of finite SIR samples strictly above the threshold. Non-finite
/// samples are excluded; their count is reported through excluded_count when
/// given. Throws when the series is empty.
double coverage_probability(const SirSeries& s, double threshold_db,
                            std::size_t* excluded_count = nullptr);

/// Element-wise rainy - sunny differences. Throws on length mismatch.
std::vector<double> weather_delta(const SirSeries& rainy, const SirSeries& sunny);

} // namespace hsrchan
