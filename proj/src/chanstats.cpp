#include "hsrchan/chanstats.hpp"

#include "hsrchan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsrchan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

bool is_los(const Mpc& m)
{
    return m.chain.size() == 1 && m.chain[0].kind == ChainStep::Kind::direct;
}

double pick_angle(const Mpc& m, AngleKind kind)
{
    switch (kind) {
    case AngleKind::asa: return m.aoa_az_deg;
    case AngleKind::asd: return m.aod_az_deg;
    case AngleKind::esa: return m.aoa_el_deg;
    case AngleKind::esd: return m.aod_el_deg;
    }
    return 0.0;
}

double wrap_deg(double a)
{
    // into (-180, 180]
    double w = std::fmod(a + 180.0, 360.0);
    if (w < 0.0) w += 360.0;
    w -= 180.0;
    if (w == -180.0) w = 180.0;
    return w;
}

// Power-weighted spread of angles offset by `shift` degrees.
double spread_about(const std::vector<double>& ang, const std::vector<double>& pw, double shift)
{
    double psum = 0.0, mean = 0.0;
    for (size_t i = 0; i < ang.size(); ++i) {
        psum += pw[i];
        mean += pw[i] * wrap_deg(ang[i] - shift);
    }
    mean /= psum;
    double var = 0.0;
    for (size_t i = 0; i < ang.size(); ++i) {
        double d = wrap_deg(wrap_deg(ang[i] - shift) - mean);
        var += pw[i] * d * d;
    }
    return std::sqrt(var / psum);
}

} // namespace

PowerSplit received_power(const MpcSet& set)
{
    double los_mw = 0.0, nlos_mw = 0.0;
    for (const auto& m : set.mpcs)
        (is_los(m) ? los_mw : nlos_mw) += dbm_to_mw(m.power_dbm);
    PowerSplit out;
    out.p_los_dbm = los_mw > 0.0 ? mw_to_dbm(los_mw) : -kInf;
    out.p_nlos_dbm = nlos_mw > 0.0 ? mw_to_dbm(nlos_mw) : -kInf;
    double total = los_mw + nlos_mw;
    out.p_total_dbm = total > 0.0 ? mw_to_dbm(total) : -kInf;
    return out;
}

std::vector<std::pair<double, double>> pdp(const MpcSet& set)
{
    std::vector<std::pair<double, double>> bins; // (delay, mW) while merging
    bins.reserve(set.mpcs.size());
    for (const auto& m : set.mpcs)
        bins.emplace_back(m.delay_s, dbm_to_mw(m.power_dbm));
    std::sort(bins.begin(), bins.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& [tau, mw] : bins) {
        if (!out.empty() && out.back().first == tau)
            out.back().second += mw;
        else
            out.emplace_back(tau, mw);
    }
    for (auto& [tau, mw] : out)
        mw = mw_to_dbm(mw);
    return out;
}

double rms_delay_spread(const MpcSet& set)
{
    if (set.mpcs.empty())
        throw std::invalid_argument("rms_delay_spread: empty path set");
    // Two-pass central moment over delay offsets: the spread (~ns) is many
    // orders below the absolute delay of a satellite path (~0.1 s), so the
    // E[t^2]-E[t]^2 form would cancel catastrophically.
    double t0 = set.mpcs.front().delay_s;
    for (const auto& m : set.mpcs)
        t0 = std::min(t0, m.delay_s);
    double psum = 0.0, m1 = 0.0;
    for (const auto& m : set.mpcs) {
        double p = dbm_to_mw(m.power_dbm);
        psum += p;
        m1 += p * (m.delay_s - t0);
    }
    const double mean = m1 / psum;
    double var = 0.0;
    for (const auto& m : set.mpcs) {
        double p = dbm_to_mw(m.power_dbm);
        double d = (m.delay_s - t0) - mean;
        var += p * d * d;
    }
    return std::sqrt(var / psum);
}

double rician_k(const MpcSet& set)
{
    if (set.mpcs.empty())
        throw std::invalid_argument("rician_k: empty path set");
    size_t strongest = 0;
    for (size_t i = 1; i < set.mpcs.size(); ++i)
        if (set.mpcs[i].power_dbm > set.mpcs[strongest].power_dbm)
            strongest = i;
    double rest_mw = 0.0;
    for (size_t i = 0; i < set.mpcs.size(); ++i)
        if (i != strongest)
            rest_mw += dbm_to_mw(set.mpcs[i].power_dbm);
    if (rest_mw == 0.0)
        return kInf;
    return set.mpcs[strongest].power_dbm - mw_to_dbm(rest_mw);
}

double angular_spread(const MpcSet& set, AngleKind kind, bool shift_minimization)
{
    if (set.mpcs.empty())
        throw std::invalid_argument("angular_spread: empty path set");
    if (set.mpcs.size() == 1)
        return 0.0; // one path has no spread; skip the rounding residue
    std::vector<double> ang, pw;
    ang.reserve(set.mpcs.size());
    pw.reserve(set.mpcs.size());
    for (const auto& m : set.mpcs) {
        ang.push_back(pick_angle(m, kind));
        pw.push_back(dbm_to_mw(m.power_dbm));
    }
    if (!shift_minimization)
        return spread_about(ang, pw, 0.0);
    double best = kInf;
    for (double a : ang)
        best = std::min(best, spread_about(ang, pw, a));
    return best;
}

NormalFit fit_normal(const std::vector<double>& samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("fit_normal: need at least 2 samples");
    NormalFit fit;
    for (double s : samples)
        fit.mu += s;
    fit.mu /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples)
        var += (s - fit.mu) * (s - fit.mu);
    fit.sigma = std::sqrt(var / static_cast<double>(samples.size()));
    return fit;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: empty sample set");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i])
            continue; // right-continuous: keep the last index of a run
        out.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    }
    return out;
}

SnapshotStats snapshot_stats(const MpcSet& set, double track_distance_m)
{
    SnapshotStats st;
    st.track_distance_m = track_distance_m;
    st.n_paths = static_cast<int>(set.mpcs.size());
    st.los_blocked = set.los_blocked;
    PowerSplit pw = received_power(set);
    st.p_los_dbm = pw.p_los_dbm;
    st.p_nlos_dbm = pw.p_nlos_dbm;
    st.p_total_dbm = pw.p_total_dbm;
    if (set.mpcs.empty()) {
        st.ds_ns = kNan;
        st.kf_db = kNan;
        st.asa_deg = st.asd_deg = st.esa_deg = st.esd_deg = kNan;
        return st;
    }
    st.ds_ns = rms_delay_spread(set) * 1e9;
    st.kf_db = rician_k(set);
    st.asa_deg = angular_spread(set, AngleKind::asa);
    st.asd_deg = angular_spread(set, AngleKind::asd);
    st.esa_deg = angular_spread(set, AngleKind::esa);
    st.esd_deg = angular_spread(set, AngleKind::esd);
    return st;
}

} // namespace hsrchan
