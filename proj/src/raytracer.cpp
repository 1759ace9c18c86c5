#include "hsrchan/raytracer.hpp"

#include "hsrchan/fresnel.hpp"
#include "hsrchan/utd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hsrchan {

namespace {

using cd = std::complex<double>;

// complex field vector for polarization tracking
struct CVec3 {
    cd x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};
};

CVec3 operator*(const cd& s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
CVec3 operator+(const CVec3& a, const CVec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
CVec3 operator*(const cd& s, const CVec3& v) { return {s * v.x, s * v.y, s * v.z}; }

cd cdot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double cnorm2(const CVec3& v) { return std::norm(v.x) + std::norm(v.y) + std::norm(v.z); }

double arg_dominant(const CVec3& v) {
    const double ax = std::norm(v.x), ay = std::norm(v.y), az = std::norm(v.z);
    if (ax >= ay && ax >= az) return std::arg(v.x);
    return ay >= az ? std::arg(v.y) : std::arg(v.z);
}

/// Unit vector perpendicular to d with maximal vertical component; the
/// transmit polarization.
Vec3 vertical_pol(const Vec3& d) {
    Vec3 v{-d.z * d.x, -d.z * d.y, 1.0 - d.z * d.z}; // z_hat - (z_hat.d) d
    const double n = norm(v);
    if (n > 1e-9) return v / n;
    Vec3 w{1.0 - d.x * d.x, -d.x * d.y, -d.x * d.z}; // x_hat fallback for vertical rays
    return normalize(w);
}

Vec3 any_perp(const Vec3& d) {
    const Vec3 ref = std::abs(d.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    return normalize(cross(d, ref));
}

/// Splits the field on the s (perpendicular) / p (parallel) basis of an
/// interface and applies per-polarization factors; d_out is the outgoing
/// propagation direction (reflected, or equal to d_in for transmission).
CVec3 apply_interface(const CVec3& e, const Vec3& d_in, const Vec3& d_out, const Vec3& n,
                      const cd& c_te, const cd& c_tm) {
    Vec3 s_hat = cross(d_in, n);
    const double sn = norm(s_hat);
    s_hat = sn > 1e-9 ? s_hat / sn : any_perp(d_in); // normal incidence: any split works
    const Vec3 p_in = cross(s_hat, d_in);
    const Vec3 p_out = cross(s_hat, d_out);
    const cd a_s = cdot(e, s_hat);
    const cd a_p = cdot(e, p_in);
    return (a_s * c_te) * s_hat + (a_p * c_tm) * p_out;
}

struct PathAccum {
    const Scene* sc;
    const Terminal* tx;
    const Terminal* rx;
    const LinkGeometry* geo;
    std::vector<Mpc>* out;

    double wavelength() const { return kSpeedOfLight / sc->frequency_hz; }
    double wavenumber() const { return 2.0 * kPi * sc->frequency_hz / kSpeedOfLight; }

    double tx_gain(const Vec3& departure) const {
        if (tx->plane_wave) return tx->pattern.max_gain_dbi;
        return pattern_gain_dbi(tx->pattern, geo->tx_bore, departure);
    }
    double rx_gain(const Vec3& arrival) const {
        return pattern_gain_dbi(rx->pattern, geo->rx_bore, arrival);
    }

    /// amp2 carries every interaction and spreading factor, so that
    /// P = Ptx * Gt * Gr * (lambda/4pi)^2 * amp2.
    void emit(std::vector<ChainStep> chain, const Vec3& departure, const Vec3& arrival,
              double length_total, double amp2, double interaction_phase) {
        if (!(amp2 > 0.0) || !std::isfinite(amp2)) return;
        Mpc m;
        m.power_dbm = tx->tx_power_dbm + tx_gain(departure) + rx_gain(arrival) +
                      20.0 * std::log10(wavelength() / (4.0 * kPi)) + 10.0 * std::log10(amp2);
        if (!std::isfinite(m.power_dbm)) return;
        m.delay_s = length_total / kSpeedOfLight;
        m.aod_az_deg = azimuth_deg(departure);
        m.aod_el_deg = elevation_deg(departure);
        m.aoa_az_deg = azimuth_deg(arrival);
        m.aoa_el_deg = elevation_deg(arrival);
        m.phase_rad = std::remainder(interaction_phase - wavenumber() * length_total, 2.0 * kPi);
        m.chain = std::move(chain);
        out->push_back(std::move(m));
    }

    /// 1/r spreading referenced to the fixed feed distance for plane-wave Tx.
    double spreading_distance(double unfolded) const {
        return tx->plane_wave ? tx->nominal_distance_m : unfolded;
    }
};

} // namespace

double fspl_db(double distance_m, double frequency_hz) {
    return 20.0 * std::log10(4.0 * kPi * distance_m * frequency_hz / kSpeedOfLight);
}

std::string chain_to_string(const std::vector<ChainStep>& chain) {
    std::string s;
    char buf[48];
    for (const auto& c : chain) {
        if (!s.empty()) s += ';';
        switch (c.kind) {
            case ChainStep::Kind::direct: s += "direct"; break;
            case ChainStep::Kind::reflection:
                std::snprintf(buf, sizeof buf, "refl:%d", c.index);
                s += buf;
                break;
            case ChainStep::Kind::diffraction:
                std::snprintf(buf, sizeof buf, "diff:%d", c.index);
                s += buf;
                break;
            case ChainStep::Kind::scattering:
                std::snprintf(buf, sizeof buf, "scat:%d:%d", c.index, c.tile);
                s += buf;
                break;
            case ChainStep::Kind::transmission:
                std::snprintf(buf, sizeof buf, "trans:%d", c.index);
                s += buf;
                break;
        }
    }
    return s;
}

std::vector<ChainStep> chain_from_string(const std::string& s) {
    std::vector<ChainStep> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t end = s.find(';', pos);
        if (end == std::string::npos) end = s.size();
        const std::string tok = s.substr(pos, end - pos);
        ChainStep c;
        if (tok == "direct") {
            c.kind = ChainStep::Kind::direct;
        } else if (tok.rfind("refl:", 0) == 0) {
            c.kind = ChainStep::Kind::reflection;
            c.index = std::stoi(tok.substr(5));
        } else if (tok.rfind("diff:", 0) == 0) {
            c.kind = ChainStep::Kind::diffraction;
            c.index = std::stoi(tok.substr(5));
        } else if (tok.rfind("trans:", 0) == 0) {
            c.kind = ChainStep::Kind::transmission;
            c.index = std::stoi(tok.substr(6));
        } else if (tok.rfind("scat:", 0) == 0) {
            c.kind = ChainStep::Kind::scattering;
            const size_t colon = tok.find(':', 5);
            c.index = std::stoi(tok.substr(5, colon - 5));
            c.tile = std::stoi(tok.substr(colon + 1));
        } else {
            throw std::invalid_argument("bad chain token: " + tok);
        }
        out.push_back(c);
        pos = end + 1;
    }
    return out;
}

LinkGeometry link_geometry(const Scene& sc, const Terminal& tx, const Terminal& rx, const Vec3& track_sample) {
    LinkGeometry g;
    g.tx_pos = sc.rx_position(tx, track_sample);
    g.rx_pos = sc.rx_position(rx, track_sample);
    const Vec3 start = sc.trajectory.start;
    const Vec3 tx_pos0 = sc.rx_position(tx, start);
    const Vec3 rx_pos0 = sc.rx_position(rx, start);
    g.tx_bore = tx.pointing == PointingMode::track_target ? g.rx_pos - g.tx_pos : rx_pos0 - tx_pos0;
    g.rx_bore = rx.pointing == PointingMode::track_target ? g.tx_pos - g.rx_pos : tx_pos0 - rx_pos0;
    return g;
}

void trace_direct(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                  std::vector<Mpc>& out, bool& los_blocked) {
    const Vec3 d = geo.rx_pos - geo.tx_pos;
    const double len = norm(d);
    los_blocked = !sc.segment_clear(geo.tx_pos, geo.rx_pos);
    if (los_blocked || len < 1e-9) return;

    PathAccum acc{&sc, &tx, &rx, &geo, &out};
    const Vec3 dir = d / len;
    const double dist = acc.spreading_distance(len);
    acc.emit({{ChainStep::Kind::direct, -1, -1}}, dir, -dir, len, 1.0 / (dist * dist), 0.0);
}

void trace_reflections(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                       int max_order, std::vector<Mpc>& out) {
    PathAccum acc{&sc, &tx, &rx, &geo, &out};
    const int n_surf = static_cast<int>(sc.surfaces.size());

    auto mirror = [](const Vec3& p, const Surface& s) {
        return p - 2.0 * (dot(s.normal, p) - s.plane_d) * s.normal;
    };
    auto outside = [](const Vec3& p, const Surface& s) { return dot(s.normal, p) - s.plane_d > 1e-9; };
    // intersection of segment a->b with the plane of s, inside the polygon
    auto plane_point = [&](const Vec3& a, const Vec3& b, const Surface& s) -> std::optional<Vec3> {
        const double da = dot(s.normal, a) - s.plane_d;
        const double db = dot(s.normal, b) - s.plane_d;
        if (da * db >= 0.0) return std::nullopt; // no proper crossing
        const double tau = da / (da - db);
        if (tau <= 1e-9 || tau >= 1.0 - 1e-9) return std::nullopt;
        const Vec3 q = a + tau * (b - a);
        if (!sc.point_in_surface(s, q)) return std::nullopt;
        return q;
    };

    for (int i = 0; i < n_surf; ++i) {
        const Surface& s1 = sc.surfaces[static_cast<size_t>(i)];
        if (!outside(geo.tx_pos, s1)) continue;
        const Vec3 img1 = mirror(geo.tx_pos, s1);

        // single bounce
        if (outside(geo.rx_pos, s1)) {
            if (const auto q = plane_point(img1, geo.rx_pos, s1)) {
                if (sc.segment_clear(geo.tx_pos, *q, i) && sc.segment_clear(*q, geo.rx_pos, i)) {
                    const Vec3 d1 = normalize(*q - geo.tx_pos);
                    const double theta = std::acos(std::min(1.0, std::abs(dot(d1, s1.normal))));
                    const FresnelCoeffs fc = fresnel_halfspace(sc.materials[static_cast<size_t>(s1.material)], theta, sc.frequency_hz);
                    const Vec3 d2 = reflect(d1, s1.normal);
                    const CVec3 e = apply_interface(cd{1.0, 0.0} * vertical_pol(d1), d1, d2, s1.normal, fc.r_te, fc.r_tm);
                    const double len = norm(*q - geo.tx_pos) + norm(geo.rx_pos - *q);
                    const double dist = acc.spreading_distance(len);
                    acc.emit({{ChainStep::Kind::reflection, i, -1}}, d1, normalize(*q - geo.rx_pos), len,
                             cnorm2(e) / (dist * dist), arg_dominant(e));
                }
            }
        }

        if (max_order < 2) continue;

        for (int j = 0; j < n_surf; ++j) {
            if (j == i) continue;
            const Surface& s2 = sc.surfaces[static_cast<size_t>(j)];
            if (!outside(geo.rx_pos, s2)) continue;
            const Vec3 img2 = mirror(img1, s2);
            const auto q2 = plane_point(img2, geo.rx_pos, s2);
            if (!q2) continue;
            const auto q1 = plane_point(img1, *q2, s1);
            if (!q1) continue;
            if (!outside(*q2, s1) || !outside(*q1, s2)) continue;
            if (!sc.segment_clear(geo.tx_pos, *q1, i) || !sc.segment_clear(*q1, *q2, i, j) ||
                !sc.segment_clear(*q2, geo.rx_pos, j))
                continue;

            const Vec3 d1 = normalize(*q1 - geo.tx_pos);
            const Vec3 d2 = reflect(d1, s1.normal);
            const Vec3 d3 = reflect(d2, s2.normal);
            const Material& m1 = sc.materials[static_cast<size_t>(s1.material)];
            const Material& m2 = sc.materials[static_cast<size_t>(s2.material)];
            const double th1 = std::acos(std::min(1.0, std::abs(dot(d1, s1.normal))));
            const double th2 = std::acos(std::min(1.0, std::abs(dot(d2, s2.normal))));
            const FresnelCoeffs f1 = fresnel_halfspace(m1, th1, sc.frequency_hz);
            const FresnelCoeffs f2 = fresnel_halfspace(m2, th2, sc.frequency_hz);
            CVec3 e = apply_interface(cd{1.0, 0.0} * vertical_pol(d1), d1, d2, s1.normal, f1.r_te, f1.r_tm);
            e = apply_interface(e, d2, d3, s2.normal, f2.r_te, f2.r_tm);
            const double len = norm(*q1 - geo.tx_pos) + norm(*q2 - *q1) + norm(geo.rx_pos - *q2);
            const double dist = acc.spreading_distance(len);
            acc.emit({{ChainStep::Kind::reflection, i, -1}, {ChainStep::Kind::reflection, j, -1}},
                     d1, normalize(*q2 - geo.rx_pos), len, cnorm2(e) / (dist * dist), arg_dominant(e));
        }
    }
}

void trace_diffraction(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                       std::vector<Mpc>& out) {
    PathAccum acc{&sc, &tx, &rx, &geo, &out};
    const double k = acc.wavenumber();

    for (size_t wi = 0; wi < sc.wedges.size(); ++wi) {
        const Wedge& w = sc.wedges[wi];
        const double edge_len = norm(w.b - w.a);
        const Vec3 e_hat = w.edge_dir;

        // Fermat point: unfold the two perpendicular distances about the edge
        const double ut = dot(geo.tx_pos - w.a, e_hat);
        const double ur = dot(geo.rx_pos - w.a, e_hat);
        const Vec3 pt = geo.tx_pos - w.a - ut * e_hat;
        const Vec3 pr = geo.rx_pos - w.a - ur * e_hat;
        const double rho_t = norm(pt);
        const double rho_r = norm(pr);
        if (rho_t + rho_r < 1e-9) continue;
        const double tstar = ut + (ur - ut) * rho_t / (rho_t + rho_r);
        if (tstar < 1e-6 || tstar > edge_len - 1e-6) continue; // corner, not an interior edge point
        const Vec3 q = w.a + tstar * e_hat;

        const Vec3 to_tx = geo.tx_pos - q;
        const Vec3 to_rx = geo.rx_pos - q;
        const double s_inc = norm(to_tx);
        const double s_dif = norm(to_rx);
        if (s_inc < 1e-9 || s_dif < 1e-9) continue;

        // both endpoints must see the exterior region of the wedge
        auto frame_angle = [&](const Vec3& v) {
            const Vec3 perp = v - dot(v, e_hat) * e_hat;
            const double pn = norm(perp);
            if (pn < 1e-12) return -1.0;
            double a = std::atan2(dot(perp / pn, w.n0), dot(perp / pn, w.t0));
            if (a < 0.0) a += 2.0 * kPi;
            return a;
        };
        const double phi_inc = frame_angle(to_tx);
        const double phi_obs = frame_angle(to_rx);
        if (phi_inc < 1e-6 || phi_inc > w.exterior_angle - 1e-6) continue;
        if (phi_obs < 1e-6 || phi_obs > w.exterior_angle - 1e-6) continue;

        if (!sc.segment_clear(geo.tx_pos, q, w.face0, w.face1) ||
            !sc.segment_clear(q, geo.rx_pos, w.face0, w.face1))
            continue;

        const Vec3 d_inc = to_tx / -s_inc; // tx -> q
        const Vec3 d_dif = to_rx / s_dif;  // q -> rx
        const double beta0 = std::acos(std::clamp(dot(d_inc, e_hat), -1.0, 1.0));
        const double sin_b = std::sin(beta0);
        if (sin_b < 1e-6) continue;

        const double dist_L = tx.plane_wave ? s_dif * sin_b * sin_b
                                            : s_inc * s_dif / (s_inc + s_dif) * sin_b * sin_b;
        const double n_wedge = w.exterior_angle / kPi;
        const Material& m0 = sc.materials[static_cast<size_t>(sc.surfaces[static_cast<size_t>(w.face0)].material)];
        const Material& mn = sc.materials[static_cast<size_t>(sc.surfaces[static_cast<size_t>(w.face1)].material)];
        const UtdCoeffs dc = utd_coefficients(k, n_wedge, beta0, phi_inc, phi_obs, dist_L, m0, mn, sc.frequency_hz);

        // edge-fixed polarization split
        Vec3 phi_hat_i = cross(e_hat, d_inc);
        Vec3 phi_hat_d = cross(e_hat, d_dif);
        const double ni = norm(phi_hat_i), nd = norm(phi_hat_d);
        if (ni < 1e-9 || nd < 1e-9) continue;
        phi_hat_i = phi_hat_i / ni;
        phi_hat_d = phi_hat_d / nd;
        const Vec3 beta_hat_i = cross(phi_hat_i, d_inc);
        const Vec3 beta_hat_d = cross(phi_hat_d, d_dif);

        // both edge frames use the same edge direction, so the forward
        // continuation keeps its orientation and the coefficients apply as-is;
        // their built-in front sign already gives -1/2 lit, +1/2 shadow at the
        // incidence boundary, which is what splices the direct field smoothly.
        const CVec3 e_in = cd{1.0, 0.0} * vertical_pol(d_inc);
        const cd a_beta = cdot(e_in, beta_hat_i);
        const cd a_phi = cdot(e_in, phi_hat_i);
        const CVec3 e_out = (dc.d_soft * a_beta) * beta_hat_d + (dc.d_hard * a_phi) * phi_hat_d;

        const double len = s_inc + s_dif;
        double spread2;
        if (tx.plane_wave) {
            spread2 = 1.0 / (tx.nominal_distance_m * tx.nominal_distance_m * s_dif);
        } else {
            spread2 = 1.0 / (s_inc * s_dif * (s_inc + s_dif));
        }
        acc.emit({{ChainStep::Kind::diffraction, static_cast<int>(wi), -1}}, d_inc, -d_dif,
                 len, cnorm2(e_out) * spread2, arg_dominant(e_out));
    }
}

void trace_transmission(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                        std::vector<Mpc>& out) {
    const Vec3 d = geo.rx_pos - geo.tx_pos;
    const double len = norm(d);
    if (len < 1e-9) return;
    const Vec3 dir = d / len;

    const auto hits = sc.segment_hits(geo.tx_pos, geo.rx_pos);
    if (hits.empty()) return;

    PathAccum acc{&sc, &tx, &rx, &geo, &out};
    const double k0 = acc.wavenumber();

    CVec3 e = cd{1.0, 0.0} * vertical_pol(dir);
    std::vector<ChainStep> chain;
    std::vector<std::pair<int, double>> open; // object id -> entry t

    for (const Hit& h : hits) {
        const Surface& s = sc.surfaces[static_cast<size_t>(h.surface)];
        const Material& m = sc.materials[static_cast<size_t>(s.material)];
        const double cos_i = std::min(1.0, std::abs(dot(dir, s.normal)));
        const double theta = std::acos(cos_i);
        const FresnelCoeffs fc = fresnel_halfspace(m, theta, sc.frequency_hz);
        e = apply_interface(e, dir, dir, s.normal, fc.t_te, fc.t_tm);
        chain.push_back({ChainStep::Kind::transmission, h.surface, -1});

        auto it = std::find_if(open.begin(), open.end(),
                               [&](const auto& p) { return p.first == s.object_id; });
        if (it == open.end()) {
            open.emplace_back(s.object_id, h.t);
        } else {
            // exiting the solid: bulk decay over the normal depth
            const double depth = (h.t - it->second) * cos_i;
            const double alpha = k0 * std::abs(fc.q2.imag());
            e = cd{std::exp(-alpha * depth), 0.0} * e;
            open.erase(it);
        }
    }
    if (!open.empty()) return; // segment ends inside a solid or exits a missing facet

    const double amp2 = cnorm2(e);
    if (amp2 <= 0.0) return;
    const double dist = acc.spreading_distance(len);
    acc.emit(std::move(chain), dir, -dir, len, amp2 / (dist * dist), arg_dominant(e));
}

void trace_scattering(const Scene& sc, const Terminal& tx, const Terminal& rx, const LinkGeometry& geo,
                      double threshold_dbm, std::vector<Mpc>& out) {
    PathAccum acc{&sc, &tx, &rx, &geo, &out};
    const double lam = acc.wavelength();
    const double base_max_dbm = tx.tx_power_dbm + tx.pattern.max_gain_dbi + rx.pattern.max_gain_dbi +
                                20.0 * std::log10(lam / (4.0 * kPi));

    for (size_t ti = 0; ti < sc.tiles.size(); ++ti) {
        const ScatterTile& tile = sc.tiles[ti];
        const Surface& s = sc.surfaces[static_cast<size_t>(tile.surface)];
        const Material& m = sc.materials[static_cast<size_t>(s.material)];

        const Vec3 to_tx = geo.tx_pos - tile.center;
        const Vec3 to_rx = geo.rx_pos - tile.center;
        const double r_s = norm(to_rx);
        if (r_s < 1e-6) continue;
        const double r_i_true = norm(to_tx);
        const double r_i = tx.plane_wave ? tx.nominal_distance_m : r_i_true;

        // conservative bound with unit lobe/cosine and maximal gains
        const double geom = m.scatter_coeff * m.scatter_coeff * tile.area / (4.0 * kPi * r_i * r_i * r_s * r_s);
        if (!(geom > 0.0)) continue;
        if (base_max_dbm + 10.0 * std::log10(geom) < threshold_dbm) continue;

        const Vec3 in_dir = -1.0 / r_i_true * to_tx; // tx -> tile
        const Vec3 out_dir = to_rx / r_s;            // tile -> rx
        const double cos_i = dot(s.normal, to_tx / r_i_true);
        const double cos_o = dot(s.normal, out_dir);
        if (cos_i <= 1e-9 || cos_o <= 1e-9) continue; // both ends on the lit side

        const Vec3 spec = reflect(in_dir, s.normal);
        const double cos_psi = std::clamp(dot(spec, out_dir), -1.0, 1.0);
        const double lobe = std::pow(0.5 * (1.0 + cos_psi), m.scatter_exponent);
        const double amp2 = geom * cos_i * lobe;
        if (!(amp2 > 0.0)) continue;
        if (base_max_dbm + 10.0 * std::log10(amp2) < threshold_dbm) continue;

        if (!sc.segment_clear(geo.tx_pos, tile.center, tile.surface) ||
            !sc.segment_clear(tile.center, geo.rx_pos, tile.surface))
            continue;

        const double len = r_i_true + r_s;
        acc.emit({{ChainStep::Kind::scattering, tile.surface, static_cast<int>(ti)}},
                 in_dir, -out_dir, len, amp2, 0.0);
    }
}

MpcSet trace_snapshot(const Scene& sc, const Terminal& tx, const Terminal& rx,
                      const Vec3& track_sample, int snapshot_index, const RtParams& params) {
    MpcSet set;
    set.snapshot_index = snapshot_index;
    const LinkGeometry geo = link_geometry(sc, tx, rx, track_sample);

    std::vector<Mpc> paths;
    bool blocked = false;
    {
        std::vector<Mpc> direct_out;
        trace_direct(sc, tx, rx, geo, direct_out, blocked);
        if (params.enable_direct) {
            for (auto& m : direct_out) paths.push_back(std::move(m));
        }
    }
    set.los_blocked = blocked;

    if (params.enable_reflections && params.max_reflections > 0)
        trace_reflections(sc, tx, rx, geo, params.max_reflections, paths);
    if (params.enable_diffraction) trace_diffraction(sc, tx, rx, geo, paths);
    if (params.enable_transmission && blocked) trace_transmission(sc, tx, rx, geo, paths);

    if (params.enable_scattering) {
        double strongest = -std::numeric_limits<double>::infinity();
        for (const auto& m : paths) strongest = std::max(strongest, m.power_dbm);
        const double threshold = std::isfinite(strongest)
                                     ? strongest - params.cutoff_db
                                     : -std::numeric_limits<double>::infinity();
        trace_scattering(sc, tx, rx, geo, threshold, paths);
    }

    double strongest = -std::numeric_limits<double>::infinity();
    for (const auto& m : paths) strongest = std::max(strongest, m.power_dbm);
    const double keep = strongest - params.cutoff_db;
    for (auto& m : paths) {
        if (m.power_dbm >= keep) set.mpcs.push_back(std::move(m));
    }
    std::sort(set.mpcs.begin(), set.mpcs.end(), [](const Mpc& a, const Mpc& b) {
        if (a.power_dbm != b.power_dbm) return a.power_dbm > b.power_dbm;
        if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
        return chain_to_string(a.chain) < chain_to_string(b.chain);
    });
    return set;
}

} // namespace hsrchan
