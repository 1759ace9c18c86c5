#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsrchan {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalize(const Vec3& v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

/// Mirror direction d about unit normal n (d pointing into the surface).
inline Vec3 reflect(const Vec3& d, const Vec3& n) { return d - 2.0 * dot(d, n) * n; }

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Azimuth in (-180, 180], elevation in [-90, 90], both degrees, of a unit direction.
inline double azimuth_deg(const Vec3& d) {
    double az = rad2deg(std::atan2(d.y, d.x));
    if (az <= -180.0) az += 360.0;
    return az;
}

inline double elevation_deg(const Vec3& d) {
    const double s = std::clamp(d.z, -1.0, 1.0);
    return rad2deg(std::asin(s));
}

struct Ray {
    Vec3 origin;
    Vec3 dir; // unit length
};

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void grow(const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void grow(const Aabb& b) { grow(b.lo); grow(b.hi); }

    Vec3 center() const { return (lo + hi) * 0.5; }

    bool contains(const Vec3& p, double pad = 0.0) const {
        return p.x >= lo.x - pad && p.x <= hi.x + pad && p.y >= lo.y - pad && p.y <= hi.y + pad &&
               p.z >= lo.z - pad && p.z <= hi.z + pad;
    }

    /// Volume overlap test; touching faces/edges do not count as overlap.
    bool overlaps_volume(const Aabb& o, double eps = 1e-9) const {
        return lo.x < o.hi.x - eps && hi.x > o.lo.x + eps &&
               lo.y < o.hi.y - eps && hi.y > o.lo.y + eps &&
               lo.z < o.hi.z - eps && hi.z > o.lo.z + eps;
    }

    /// Slab test over [tmin, tmax]; inverse direction precomputed by the caller.
    bool hit(const Vec3& origin, const Vec3& inv_dir, double tmin, double tmax) const {
        double t0 = (lo.x - origin.x) * inv_dir.x;
        double t1 = (hi.x - origin.x) * inv_dir.x;
        if (inv_dir.x < 0.0) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmax < tmin) return false;
        t0 = (lo.y - origin.y) * inv_dir.y;
        t1 = (hi.y - origin.y) * inv_dir.y;
        if (inv_dir.y < 0.0) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmax < tmin) return false;
        t0 = (lo.z - origin.z) * inv_dir.z;
        t1 = (hi.z - origin.z) * inv_dir.z;
        if (inv_dir.z < 0.0) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        return tmax >= tmin;
    }
};

} // namespace hsrchan
