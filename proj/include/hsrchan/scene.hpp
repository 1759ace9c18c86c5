#pragma once

#include "hsrchan/antenna.hpp"
#include "hsrchan/geometry.hpp"
#include "hsrchan/material.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hsrchan {

/// Planar convex polygon facet with an outward normal.
struct Surface {
    std::vector<Vec3> vertices; // counter-clockwise seen from the normal side
    Vec3 normal;                // unit
    double plane_d = 0.0;       // dot(normal, p) == plane_d on the plane
    int material = 0;           // index into Scene::materials
    int object_id = -1;         // facets of one solid share this
    std::string tag;            // ground, wall, bridge, pylon, noise-barrier, building, ...
    // derived at registration
    Aabb bounds;
    Vec3 centroid;
    double area = 0.0;
    Vec3 u_axis, v_axis;        // in-plane orthonormal frame
    std::vector<std::pair<double, double>> verts2d; // vertices in (u,v), about centroid
};

/// Straight edge between two flanking facets, used for diffraction.
/// phi convention: directions perpendicular to the edge are measured from t0
/// (in face 0, pointing away from the edge) rotating through n0, so the
/// exterior region is phi in (0, exterior_angle).
struct Wedge {
    Vec3 a, b;
    int face0 = -1, face1 = -1;
    Vec3 edge_dir;               // unit, a -> b, right-handed with (t0, n0)
    Vec3 t0, n0;                 // face-0 tangent (away from edge) and outward normal
    double exterior_angle = 0.0; // radians; n = exterior_angle / pi
};

/// Pre-gridded patch of a facet used by the diffuse scattering pass.
struct ScatterTile {
    int surface = -1;
    Vec3 center;
    double area = 0.0;
};

struct Hit {
    double t = 0.0;
    int surface = -1;
};

struct Trajectory {
    Vec3 start, end;       // railhead level
    int sample_count = 2;
    double speed_mps = 0.0; // metadata only
};

/// Evenly spaced railhead positions including both endpoints.
std::vector<Vec3> sample_trajectory(const Trajectory& t);

/// One end of a radio link.
struct Terminal {
    std::string id;
    double tx_power_dbm = 0.0;
    AntennaPattern pattern;
    PointingMode pointing = PointingMode::track_target;
    bool rides_train = false;      // position = trajectory sample + (0,0,height_m)
    double height_m = 0.0;
    Vec3 position;                 // fixed terminals only
    bool plane_wave = false;       // distant source: fixed spreading distance, fed at max gain
    double nominal_distance_m = 0.0;
};

struct Bvh {
    struct Node {
        Aabb box;
        int left = -1, right = -1; // children, or
        int first = 0, count = 0;  // leaf range into prim order
    };
    std::vector<Node> nodes;
    std::vector<int> order;

    void build(const std::vector<Aabb>& boxes);

    template <class Visit>
    void traverse(const Vec3& origin, const Vec3& inv_dir, double tmin, double tmax, Visit&& visit) const {
        if (nodes.empty()) return;
        int stack[64];
        int sp = 0;
        stack[sp++] = 0;
        while (sp > 0) {
            const Node& n = nodes[stack[--sp]];
            if (!n.box.hit(origin, inv_dir, tmin, tmax)) continue;
            if (n.left < 0) {
                for (int i = 0; i < n.count; ++i) visit(order[n.first + i]);
            } else {
                stack[sp++] = n.left;
                stack[sp++] = n.right;
            }
        }
    }
};

struct Scene {
    double frequency_hz = 22.6e9;
    std::vector<Material> materials;
    std::vector<Surface> surfaces;
    std::vector<Wedge> wedges;
    std::vector<ScatterTile> tiles;
    Trajectory trajectory;

    Terminal bs, tr_ue, sa, sa_ue;
    Vec3 satellite_dir;            // unit, scene -> satellite
    double satellite_distance_m = 0.0;

    /// Registers a facet: computes plane, frame, bounds. Vertices must be
    /// planar and counter-clockwise around the intended outward normal.
    int add_surface(std::vector<Vec3> vertices, int material, int object_id, std::string tag);

    /// Axis-aligned box; emits outward facets and convex edges. Boxes resting
    /// on other geometry skip their hidden bottom facet and its rim edges.
    void add_box(const Aabb& b, int material, int object_id, const std::string& tag, bool omit_bottom);

    /// Builds the BVH and the scattering grid; call after the last facet.
    void finalize(double tile_area_m2);

    /// Nearest facet hit with t in (tmin, tmax); facets in `skip` (up to two
    /// ids, -1 for unused) are transparent. Ties on t resolve to the smaller
    /// surface id.
    std::optional<Hit> first_hit(const Ray& ray, double tmin = 1e-9, double tmax = std::numeric_limits<double>::infinity(),
                                 int skip0 = -1, int skip1 = -1) const;

    /// True when nothing lies strictly between a and b.
    bool segment_clear(const Vec3& a, const Vec3& b, int skip0 = -1, int skip1 = -1) const;

    /// All facet crossings of the open segment (a, b), ordered by t.
    std::vector<Hit> segment_hits(const Vec3& a, const Vec3& b, int skip0 = -1, int skip1 = -1) const;

    /// Plane hit + point-in-polygon. Exposed for the brute-force test oracle.
    std::optional<double> intersect_surface(const Surface& s, const Ray& ray, double tmin, double tmax) const;

    bool point_in_surface(const Surface& s, const Vec3& p) const;

    Vec3 rx_position(const Terminal& t, const Vec3& track_sample) const {
        return t.rides_train ? track_sample + Vec3{0.0, 0.0, t.height_m} : t.position;
    }

private:
    Bvh bvh_;
};

/// Geometry, terminal, and link-budget knobs for the bundled railway scene.
/// Every dimension is overridable from JSON; defaults reproduce the intended
/// occlusion windows (bridges over [20,40] and [60,90] m, pylons at
/// 150/250/350/450 m).
struct ScenarioConfig {
    double frequency_hz = 22.6e9;

    double track_length_m = 500.0;
    int sample_count = 1441;
    double speed_kmh = 300.0;

    struct GroundCfg {
        double x0 = -80, x1 = 580, y0 = -14, y1 = 40;
        std::string material = "concrete";
    } ground;

    struct WallCfg {
        bool enabled = true;
        double x0 = -40, x1 = 540, y0 = -12.6, y1 = -12, height = 26;
        std::string material = "brick";
    } wall;

    struct BridgeCfg {
        double span0 = 0, span1 = 0;   // along-track interval
        double clearance = 6, thickness = 1;
        double y0 = -11, y1 = 30;
        std::string material = "concrete";
    };
    std::vector<BridgeCfg> bridges = {{20, 40, 6, 1, -11, 30, "concrete"},
                                      {60, 90, 6, 1, -11, 30, "concrete"}};

    struct PylonCfg {
        std::vector<double> positions = {150, 250, 350, 450};
        double cross_section = 1.0; // square column side
        double height = 12.0;
        double side_offset = 5.0;   // column center distance from track axis, both sides
        std::string material = "metal";
    } pylons;

    struct BarrierCfg {
        bool enabled = true;
        double x0 = 280, x1 = 480, y = 8.0, thickness = 0.3, height = 3.0;
        std::string material = "metal";
    } barrier;

    struct BuildingCfg {
        double x0 = 0, x1 = 0, y0 = 0, y1 = 0, height = 0;
        std::string material = "concrete";
    };
    std::vector<BuildingCfg> buildings = {{120, 160, 18, 30, 12, "marble"},
                                          {330, 370, 20, 32, 10, "toughened_glass"}};

    struct TerminalCfg {
        double tx_power_dbm = 0.0;
        double max_gain_dbi = 0.0;
        double beamwidth_deg = 10.0;
        double sidelobe_depth_db = 30.0; // floor = max_gain - depth
        double height_m = 0.0;
        Vec3 position;
        PointingMode pointing = PointingMode::track_target;
    };
    // Base station on the retaining-wall top; train-roof UEs; distant satellite.
    TerminalCfg bs = {20.0, 16.0, 20.0, 30.0, 0.0, {-30.0, -11.5, 26.0}, PointingMode::track_target};
    TerminalCfg tr_ue = {0.0, 22.0, 20.0, 30.0, 4.7, {}, PointingMode::fixed};
    TerminalCfg sa = {40.6, 53.0, 1.0, 30.0, 0.0, {}, PointingMode::fixed};
    // The narrow tracking dish suppresses off-axis pickup far more than the
    // wide horns do; its deeper floor is what keeps the ground bounce weak.
    TerminalCfg sa_ue = {0.0, 32.0, 3.0, 45.0, 5.2, {}, PointingMode::track_target};

    double sat_elevation_deg = 45.0;
    double sat_azimuth_deg = 90.0; // from +x (along track), toward +y at 90
    double sat_distance_m = 37469300.0;

    std::vector<Material> materials = builtin_materials();
};

/// Assembles the railway scene. Throws std::invalid_argument on non-positive
/// dimensions, unknown materials, or solids that overlap in volume.
Scene build_hsr_scene(const ScenarioConfig& cfg, double tile_area_m2 = 1.0);

} // namespace hsrchan
