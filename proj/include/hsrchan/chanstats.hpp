#pragma once

#include "hsrchan/raytracer.hpp"

#include <utility>
#include <vector>

namespace hsrchan {

/// dBm split of one snapshot; -inf marks an absent component.
struct PowerSplit {
    double p_los_dbm;
    double p_nlos_dbm;
    double p_total_dbm;
};

/// LOS = the path whose chain is exactly {direct}.
PowerSplit received_power(const MpcSet& set);

/// (delay_s, power_dbm) bins sorted by delay; identical delays merge by
/// linear power addition.
std::vector<std::pair<double, double>> pdp(const MpcSet& set);

/// Square root of the second central moment of the PDP, linear power weights.
/// Throws on an empty set.
double rms_delay_spread(const MpcSet& set);

/// Power ratio of the strongest path to the sum of all remaining ones, dB.
/// Single-path sets return +inf. Throws on an empty set.
double rician_k(const MpcSet& set);

enum class AngleKind { asa, asd, esa, esd };

/// Power-weighted angular spread in degrees: the square root of the weighted
/// second moment of the path angles recentered about their power-weighted
/// mean, residuals wrapped into (-180, 180]. With shift_minimization the
/// computation is repeated with the angle origin placed at each path angle
/// and the minimum spread is returned; off by default.
double angular_spread(const MpcSet& set, AngleKind kind, bool shift_minimization = false);

struct NormalFit {
    double mu = 0.0;
    double sigma = 0.0; // population standard deviation
};

/// Throws when fewer than 2 samples are given.
NormalFit fit_normal(const std::vector<double>& samples);

/// Right-continuous empirical CDF as (value, F(value)) pairs over the sorted
/// distinct values; F(max) = 1. Throws on empty input.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

/// Row of the per-case statistics table.
struct SnapshotStats {
    int snapshot_index = 0;
    double track_distance_m = 0.0;
    double p_los_dbm = 0.0;
    double p_nlos_dbm = 0.0;
    double p_total_dbm = 0.0;
    double ds_ns = 0.0;
    double kf_db = 0.0;
    double asa_deg = 0.0, asd_deg = 0.0, esa_deg = 0.0, esd_deg = 0.0;
    int n_paths = 0;
    bool los_blocked = false;
};

/// NaN statistics for empty sets; power sentinels stay -inf.
SnapshotStats snapshot_stats(const MpcSet& set, double track_distance_m);

} // namespace hsrchan
