#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ars {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& axis(int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

// Axis-aligned box, inclusive bounds in world meters.
struct Aabb {
    Vec3 lo, hi;

    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
    Vec3 center() const { return (lo + hi) * 0.5; }
    Vec3 extent() const { return hi - lo; }
    double volume() const {
        const Vec3 e = extent();
        return e.x * e.y * e.z;
    }
};

// Line-box intersection interval via the slab method. Returns the parameters
// (t_near, t_far) of the infinite line origin + t*dir, unfiltered by sign;
// nullopt when the line misses the box. Zero direction components are handled
// through IEEE infinities.
struct SlabInterval {
    double t_near = 0.0;
    double t_far = 0.0;
    int near_axis = -1;  // axis whose slab produced t_near
};

inline std::optional<SlabInterval> slab_intersect(const Vec3& origin, const Vec3& dir,
                                                  const Aabb& box) {
    double t_near = -kInf, t_far = kInf;
    int near_axis = -1;
    for (int a = 0; a < 3; ++a) {
        const double o = origin[a], d = dir[a];
        const double lo = box.lo[a], hi = box.hi[a];
        if (d == 0.0) {
            if (o < lo || o > hi) return std::nullopt;
            continue;
        }
        double t0 = (lo - o) / d;
        double t1 = (hi - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_near) {
            t_near = t0;
            near_axis = a;
        }
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return std::nullopt;
    }
    return SlabInterval{t_near, t_far, near_axis};
}

inline double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace ars
