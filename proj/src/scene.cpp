#include "hsrchan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace hsrchan {

std::vector<Vec3> sample_trajectory(const Trajectory& t) {
    if (t.sample_count < 2) throw std::invalid_argument("trajectory needs at least 2 samples");
    std::vector<Vec3> out(static_cast<size_t>(t.sample_count));
    const Vec3 delta = t.end - t.start;
    for (int i = 0; i < t.sample_count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(t.sample_count - 1);
        out[static_cast<size_t>(i)] = t.start + f * delta;
    }
    return out;
}

namespace {

Vec3 newell_normal(const std::vector<Vec3>& v) {
    Vec3 n;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec3& a = v[i];
        const Vec3& b = v[(i + 1) % v.size()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

} // namespace

int Scene::add_surface(std::vector<Vec3> vertices, int material, int object_id, std::string tag) {
    if (vertices.size() < 3) throw std::invalid_argument("surface needs at least 3 vertices");
    if (material < 0 || material >= static_cast<int>(materials.size()))
        throw std::invalid_argument("surface material index out of range");

    Surface s;
    s.vertices = std::move(vertices);
    s.material = material;
    s.object_id = object_id;
    s.tag = std::move(tag);

    const Vec3 n = newell_normal(s.vertices);
    const double nn = norm(n);
    if (nn < 1e-12) throw std::invalid_argument("degenerate surface polygon");
    s.normal = n / nn;

    double d = 0.0;
    for (const auto& v : s.vertices) d += dot(s.normal, v);
    s.plane_d = d / static_cast<double>(s.vertices.size());
    for (const auto& v : s.vertices) {
        if (std::abs(dot(s.normal, v) - s.plane_d) > 1e-6)
            throw std::invalid_argument("surface polygon is not planar");
    }

    Vec3 c;
    for (const auto& v : s.vertices) { c = c + v; s.bounds.grow(v); }
    s.centroid = c / static_cast<double>(s.vertices.size());

    s.u_axis = normalize(s.vertices[1] - s.vertices[0]);
    s.v_axis = cross(s.normal, s.u_axis);

    s.verts2d.reserve(s.vertices.size());
    for (const auto& v : s.vertices) {
        const Vec3 r = v - s.centroid;
        s.verts2d.emplace_back(dot(r, s.u_axis), dot(r, s.v_axis));
    }

    double area2 = 0.0;
    for (size_t i = 0; i < s.verts2d.size(); ++i) {
        const auto& a = s.verts2d[i];
        const auto& b = s.verts2d[(i + 1) % s.verts2d.size()];
        area2 += a.first * b.second - b.first * a.second;
    }
    s.area = 0.5 * std::abs(area2);

    surfaces.push_back(std::move(s));
    return static_cast<int>(surfaces.size()) - 1;
}

namespace {

// phi convention of Wedge: measured from t0 rotating through n0.
double angle_in_frame(const Vec3& v, const Vec3& t0, const Vec3& n0) {
    double a = std::atan2(dot(v, n0), dot(v, t0));
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

} // namespace

void Scene::add_box(const Aabb& b, int material, int object_id, const std::string& tag, bool omit_bottom) {
    auto corner = [&](int ix, int iy, int iz) {
        return Vec3{ix ? b.hi.x : b.lo.x, iy ? b.hi.y : b.lo.y, iz ? b.hi.z : b.lo.z};
    };

    const int px = add_surface({corner(1, 0, 0), corner(1, 1, 0), corner(1, 1, 1), corner(1, 0, 1)}, material, object_id, tag);
    const int nx = add_surface({corner(0, 0, 0), corner(0, 0, 1), corner(0, 1, 1), corner(0, 1, 0)}, material, object_id, tag);
    const int py = add_surface({corner(0, 1, 0), corner(0, 1, 1), corner(1, 1, 1), corner(1, 1, 0)}, material, object_id, tag);
    const int ny = add_surface({corner(0, 0, 0), corner(1, 0, 0), corner(1, 0, 1), corner(0, 0, 1)}, material, object_id, tag);
    const int pz = add_surface({corner(0, 0, 1), corner(1, 0, 1), corner(1, 1, 1), corner(0, 1, 1)}, material, object_id, tag);
    const int nz = omit_bottom ? -1
                               : add_surface({corner(0, 0, 0), corner(0, 1, 0), corner(1, 1, 0), corner(1, 0, 0)}, material, object_id, tag);

    auto add_wedge = [&](int f0, int f1, const Vec3& a, const Vec3& bb) {
        if (f0 < 0 || f1 < 0) return;
        if (norm(bb - a) < 1e-9) return;
        Wedge w;
        w.a = a;
        w.b = bb;
        w.face0 = f0;
        w.face1 = f1;
        w.n0 = surfaces[static_cast<size_t>(f0)].normal;
        Vec3 e = normalize(bb - a);
        const Vec3 toward = surfaces[static_cast<size_t>(f0)].centroid - a;
        Vec3 t0 = toward - dot(toward, e) * e;
        const double tn = norm(t0);
        if (tn < 1e-12) return;
        t0 = t0 / tn;
        if (dot(cross(e, t0), w.n0) < 0.0) e = -e;
        w.edge_dir = e;
        w.t0 = t0;

        const Vec3 toward1 = surfaces[static_cast<size_t>(f1)].centroid - a;
        Vec3 t1 = toward1 - dot(toward1, e) * e;
        const double t1n = norm(t1);
        if (t1n < 1e-12) return;
        t1 = t1 / t1n;
        w.exterior_angle = angle_in_frame(t1, w.t0, w.n0);
        // only exterior (convex) edges diffract
        if (w.exterior_angle <= kPi + 1e-9) return;
        wedges.push_back(w);
    };

    // vertical edges
    add_wedge(px, ny, corner(1, 0, 0), corner(1, 0, 1));
    add_wedge(px, py, corner(1, 1, 0), corner(1, 1, 1));
    add_wedge(nx, py, corner(0, 1, 0), corner(0, 1, 1));
    add_wedge(nx, ny, corner(0, 0, 0), corner(0, 0, 1));
    // top rim
    add_wedge(ny, pz, corner(0, 0, 1), corner(1, 0, 1));
    add_wedge(py, pz, corner(0, 1, 1), corner(1, 1, 1));
    add_wedge(nx, pz, corner(0, 0, 1), corner(0, 1, 1));
    add_wedge(px, pz, corner(1, 0, 1), corner(1, 1, 1));
    // bottom rim (absent for solids resting on other geometry)
    add_wedge(ny, nz, corner(0, 0, 0), corner(1, 0, 0));
    add_wedge(py, nz, corner(0, 1, 0), corner(1, 1, 0));
    add_wedge(nx, nz, corner(0, 0, 0), corner(0, 1, 0));
    add_wedge(px, nz, corner(1, 0, 0), corner(1, 1, 0));
}

void Bvh::build(const std::vector<Aabb>& boxes) {
    nodes.clear();
    order.resize(boxes.size());
    for (size_t i = 0; i < boxes.size(); ++i) order[i] = static_cast<int>(i);
    if (boxes.empty()) return;

    std::function<int(int, int)> rec = [&](int first, int count) -> int {
        Node n;
        for (int i = 0; i < count; ++i) n.box.grow(boxes[static_cast<size_t>(order[static_cast<size_t>(first + i)])]);
        const int self = static_cast<int>(nodes.size());
        nodes.push_back(n);
        if (count <= 2) {
            nodes[static_cast<size_t>(self)].first = first;
            nodes[static_cast<size_t>(self)].count = count;
            return self;
        }
        const Vec3 ext = n.box.hi - n.box.lo;
        int axis = 0;
        if (ext.y > ext.x) axis = 1;
        if (ext.z > (axis == 0 ? ext.x : ext.y)) axis = 2;
        auto key = [&](int id) {
            const Vec3 c = boxes[static_cast<size_t>(id)].center();
            return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
        };
        std::sort(order.begin() + first, order.begin() + first + count,
                  [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
        const int half = count / 2;
        const int l = rec(first, half);
        const int r = rec(first + half, count - half);
        nodes[static_cast<size_t>(self)].left = l;
        nodes[static_cast<size_t>(self)].right = r;
        return self;
    };
    rec(0, static_cast<int>(boxes.size()));
}

void Scene::finalize(double tile_area_m2) {
    if (tile_area_m2 <= 0.0) throw std::invalid_argument("tile area must be positive");

    std::vector<Aabb> boxes;
    boxes.reserve(surfaces.size());
    for (const auto& s : surfaces) boxes.push_back(s.bounds);
    bvh_.build(boxes);

    tiles.clear();
    const double tile_len = std::sqrt(tile_area_m2);
    for (size_t si = 0; si < surfaces.size(); ++si) {
        const Surface& s = surfaces[si];
        if (materials[static_cast<size_t>(s.material)].scatter_coeff <= 0.0) continue;

        double u0 = s.verts2d[0].first, u1 = u0, v0 = s.verts2d[0].second, v1 = v0;
        for (const auto& [u, v] : s.verts2d) {
            u0 = std::min(u0, u); u1 = std::max(u1, u);
            v0 = std::min(v0, v); v1 = std::max(v1, v);
        }
        const int nu = std::max(1, static_cast<int>(std::lround((u1 - u0) / tile_len)));
        const int nv = std::max(1, static_cast<int>(std::lround((v1 - v0) / tile_len)));
        const double du = (u1 - u0) / nu;
        const double dv = (v1 - v0) / nv;
        for (int iu = 0; iu < nu; ++iu) {
            for (int iv = 0; iv < nv; ++iv) {
                const double cu = u0 + (iu + 0.5) * du;
                const double cv = v0 + (iv + 0.5) * dv;
                const Vec3 p = s.centroid + cu * s.u_axis + cv * s.v_axis;
                if (!point_in_surface(s, p)) continue;
                tiles.push_back({static_cast<int>(si), p, du * dv});
            }
        }
    }
}

bool Scene::point_in_surface(const Surface& s, const Vec3& p) const {
    const Vec3 r = p - s.centroid;
    const double pu = dot(r, s.u_axis);
    const double pv = dot(r, s.v_axis);
    const size_t n = s.verts2d.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = s.verts2d[i];
        const auto& b = s.verts2d[(i + 1) % n];
        const double ex = b.first - a.first;
        const double ey = b.second - a.second;
        if (ex * (pv - a.second) - ey * (pu - a.first) < -1e-9) return false;
    }
    return true;
}

std::optional<double> Scene::intersect_surface(const Surface& s, const Ray& ray, double tmin, double tmax) const {
    const double denom = dot(s.normal, ray.dir);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = (s.plane_d - dot(s.normal, ray.origin)) / denom;
    if (t <= tmin || t >= tmax) return std::nullopt;
    if (!point_in_surface(s, ray.origin + t * ray.dir)) return std::nullopt;
    return t;
}

std::optional<Hit> Scene::first_hit(const Ray& ray, double tmin, double tmax, int skip0, int skip1) const {
    const Vec3 inv{1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z};
    Hit best{tmax, -1};
    bool found = false;
    bvh_.traverse(ray.origin, inv, tmin, tmax, [&](int si) {
        if (si == skip0 || si == skip1) return;
        const auto t = intersect_surface(surfaces[static_cast<size_t>(si)], ray, tmin, tmax);
        if (!t) return;
        // ties on t (coplanar facets) resolve to the smaller id in every caller
        if (*t < best.t || (*t == best.t && si < best.surface)) {
            best = {*t, si};
            found = true;
        }
    });
    if (!found) return std::nullopt;
    return best;
}

bool Scene::segment_clear(const Vec3& a, const Vec3& b, int skip0, int skip1) const {
    const Vec3 d = b - a;
    const double len = norm(d);
    if (len < 1e-12) return true;
    const Ray r{a, d / len};
    return !first_hit(r, 1e-9, len * (1.0 - 1e-9), skip0, skip1).has_value();
}

std::vector<Hit> Scene::segment_hits(const Vec3& a, const Vec3& b, int skip0, int skip1) const {
    const Vec3 d = b - a;
    const double len = norm(d);
    std::vector<Hit> out;
    if (len < 1e-12) return out;
    const Ray ray{a, d / len};
    const Vec3 inv{1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z};
    const double tmax = len * (1.0 - 1e-9);
    bvh_.traverse(ray.origin, inv, 1e-9, tmax, [&](int si) {
        if (si == skip0 || si == skip1) return;
        const auto t = intersect_surface(surfaces[static_cast<size_t>(si)], ray, 1e-9, tmax);
        if (t) out.push_back({*t, si});
    });
    std::sort(out.begin(), out.end(), [](const Hit& x, const Hit& y) {
        return x.t < y.t || (x.t == y.t && x.surface < y.surface);
    });
    return out;
}

namespace {

int material_index(const std::vector<Material>& table, const std::string& name) {
    const Material& m = find_material(table, name);
    return static_cast<int>(&m - table.data());
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

Scene build_hsr_scene(const ScenarioConfig& cfg, double tile_area_m2) {
    require(cfg.frequency_hz > 0.0, "frequency must be positive");
    require(cfg.track_length_m > 0.0, "track length must be positive");
    require(cfg.sample_count >= 2, "sample count must be at least 2");

    Scene sc;
    sc.frequency_hz = cfg.frequency_hz;
    sc.materials = cfg.materials;

    struct Box {
        Aabb b;
        int mat;
        std::string tag;
        bool omit_bottom;
    };
    std::vector<Box> boxes;

    if (cfg.wall.enabled) {
        require(cfg.wall.height > 0.0 && cfg.wall.x1 > cfg.wall.x0 && cfg.wall.y1 > cfg.wall.y0, "bad wall dimensions");
        boxes.push_back({Aabb{{cfg.wall.x0, cfg.wall.y0, 0.0}, {cfg.wall.x1, cfg.wall.y1, cfg.wall.height}},
                         material_index(sc.materials, cfg.wall.material), "wall", true});
    }
    for (const auto& br : cfg.bridges) {
        require(br.span1 > br.span0 && br.clearance > 0.0 && br.thickness > 0.0 && br.y1 > br.y0, "bad bridge dimensions");
        boxes.push_back({Aabb{{br.span0, br.y0, br.clearance}, {br.span1, br.y1, br.clearance + br.thickness}},
                         material_index(sc.materials, br.material), "bridge", false});
    }
    if (!cfg.pylons.positions.empty()) {
        const auto& p = cfg.pylons;
        require(p.cross_section > 0.0 && p.height > 0.0 && p.side_offset > 0.0, "bad pylon dimensions");
        const int mat = material_index(sc.materials, p.material);
        const double h = p.cross_section / 2.0;
        for (double x : p.positions) {
            for (double side : {-p.side_offset, p.side_offset}) {
                boxes.push_back({Aabb{{x - h, side - h, 0.0}, {x + h, side + h, p.height}}, mat, "pylon", true});
            }
        }
    }
    if (cfg.barrier.enabled) {
        const auto& ba = cfg.barrier;
        require(ba.x1 > ba.x0 && ba.thickness > 0.0 && ba.height > 0.0, "bad barrier dimensions");
        boxes.push_back({Aabb{{ba.x0, ba.y, 0.0}, {ba.x1, ba.y + ba.thickness, ba.height}},
                         material_index(sc.materials, ba.material), "noise-barrier", true});
    }
    for (const auto& bl : cfg.buildings) {
        require(bl.x1 > bl.x0 && bl.y1 > bl.y0 && bl.height > 0.0, "bad building dimensions");
        boxes.push_back({Aabb{{bl.x0, bl.y0, 0.0}, {bl.x1, bl.y1, bl.height}},
                         material_index(sc.materials, bl.material), "building", true});
    }

    for (size_t i = 0; i < boxes.size(); ++i) {
        for (size_t j = i + 1; j < boxes.size(); ++j) {
            if (boxes[i].b.overlaps_volume(boxes[j].b))
                throw std::invalid_argument("scene solids '" + boxes[i].tag + "' and '" + boxes[j].tag + "' overlap");
        }
    }

    require(cfg.ground.x1 > cfg.ground.x0 && cfg.ground.y1 > cfg.ground.y0, "bad ground dimensions");
    sc.add_surface({{cfg.ground.x0, cfg.ground.y0, 0.0},
                    {cfg.ground.x1, cfg.ground.y0, 0.0},
                    {cfg.ground.x1, cfg.ground.y1, 0.0},
                    {cfg.ground.x0, cfg.ground.y1, 0.0}},
                   material_index(sc.materials, cfg.ground.material), 0, "ground");

    int object_id = 1;
    for (const auto& bx : boxes) sc.add_box(bx.b, bx.mat, object_id++, bx.tag, bx.omit_bottom);

    sc.trajectory.start = {0.0, 0.0, 0.0};
    sc.trajectory.end = {cfg.track_length_m, 0.0, 0.0};
    sc.trajectory.sample_count = cfg.sample_count;
    sc.trajectory.speed_mps = cfg.speed_kmh / 3.6;

    const double el = deg2rad(cfg.sat_elevation_deg);
    const double az = deg2rad(cfg.sat_azimuth_deg);
    sc.satellite_dir = {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
    require(cfg.sat_distance_m > 0.0, "satellite distance must be positive");
    sc.satellite_distance_m = cfg.sat_distance_m;

    auto pattern_of = [](const ScenarioConfig::TerminalCfg& t) {
        AntennaPattern p;
        p.max_gain_dbi = t.max_gain_dbi;
        p.beamwidth_deg = t.beamwidth_deg;
        p.sidelobe_floor_dbi = t.max_gain_dbi - t.sidelobe_depth_db;
        return p;
    };

    sc.bs = {"bs", cfg.bs.tx_power_dbm, pattern_of(cfg.bs), cfg.bs.pointing, false, 0.0, cfg.bs.position, false, 0.0};
    sc.tr_ue = {"tr_ue", cfg.tr_ue.tx_power_dbm, pattern_of(cfg.tr_ue), cfg.tr_ue.pointing, true, cfg.tr_ue.height_m, {}, false, 0.0};
    sc.sa_ue = {"sa_ue", cfg.sa_ue.tx_power_dbm, pattern_of(cfg.sa_ue), cfg.sa_ue.pointing, true, cfg.sa_ue.height_m, {}, false, 0.0};
    sc.sa = {"sa", cfg.sa.tx_power_dbm, pattern_of(cfg.sa), PointingMode::fixed, false, 0.0,
             sc.trajectory.start + sc.satellite_dir * cfg.sat_distance_m, true, cfg.sat_distance_m};

    sc.finalize(tile_area_m2);
    return sc;
}

} // namespace hsrchan
