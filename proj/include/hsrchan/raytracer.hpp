#pragma once

#include "hsrchan/scene.hpp"

#include <string>
#include <vector>

namespace hsrchan {

struct ChainStep {
    enum class Kind { direct, reflection, diffraction, scattering, transmission };
    Kind kind = Kind::direct;
    int index = -1; // surface id; wedge id for diffraction
    int tile = -1;  // scattering tile id
};

/// "direct", "refl:<sid>", "diff:<wid>", "scat:<sid>:<tile>", "trans:<sid>",
/// joined with ';' for multi-bounce chains.
std::string chain_to_string(const std::vector<ChainStep>& chain);
std::vector<ChainStep> chain_from_string(const std::string& s);

/// One resolvable propagation path.
struct Mpc {
    double power_dbm = 0.0;
    double delay_s = 0.0;
    double aod_az_deg = 0.0, aod_el_deg = 0.0;
    double aoa_az_deg = 0.0, aoa_el_deg = 0.0;
    double phase_rad = 0.0; // carrier phase at Rx, interaction phases included
    std::vector<ChainStep> chain;
};

/// All paths of one snapshot, strongest first.
struct MpcSet {
    int snapshot_index = 0;
    bool los_blocked = false;
    std::vector<Mpc> mpcs;
};

struct RtParams {
    double cutoff_db = 60.0;   // drop paths more than this below the strongest
    double tile_area_m2 = 1.0; // scattering grid resolution (scene build time)
    int max_reflections = 2;
    bool enable_direct = true;
    bool enable_reflections = true;
    bool enable_diffraction = true;
    bool enable_scattering = true;
    bool enable_transmission = true;
};

double fspl_db(double distance_m, double frequency_hz);

/// Positions and boresights of both ends for one snapshot. Fixed-orientation
/// antennas aim at the partner's trajectory-start position.
struct LinkGeometry {
    Vec3 tx_pos, rx_pos;
    Vec3 tx_bore, rx_bore;
};

LinkGeometry link_geometry(const Scene& sc, const Terminal& tx, const Terminal& rx, const Vec3& track_sample);

// Individual mechanisms append to `out`; exposed for targeted tests.
void trace_direct(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                  std::vector<Mpc>& out, bool& los_blocked);
void trace_reflections(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                       int max_order, std::vector<Mpc>& out);
void trace_diffraction(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                       std::vector<Mpc>& out);
void trace_transmission(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                        std::vector<Mpc>& out);
void trace_scattering(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                      double threshold_dbm, std::vector<Mpc>& out);

/// Full per-snapshot trace: all enabled mechanisms, relative power cutoff,
/// deterministic descending-power order.
MpcSet trace_snapshot(const Scene& sc, const Terminal& tx, const Terminal& rx,
                      const Vec3& track_sample, int snapshot_index, const RtParams& params);

} // namespace hsrchan
