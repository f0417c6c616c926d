#pragma once

#include <algorithm>
#include <cmath>

namespace harness {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Axis-aligned box, closed on all faces.
struct Box {
    Vec3 lo, hi;

    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }

    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
               p.z >= lo.z && p.z <= hi.z;
    }

    // Slab test for the segment a->b against the closed box.
    bool intersects_segment(const Vec3& a, const Vec3& b) const {
        double t0 = 0.0, t1 = 1.0;
        const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
        const double p[3] = {a.x, a.y, a.z};
        const double mn[3] = {lo.x, lo.y, lo.z};
        const double mx[3] = {hi.x, hi.y, hi.z};
        for (int i = 0; i < 3; ++i) {
            if (std::abs(d[i]) < 1e-300) {
                if (p[i] < mn[i] || p[i] > mx[i]) return false;
            } else {
                double ta = (mn[i] - p[i]) / d[i];
                double tb = (mx[i] - p[i]) / d[i];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                if (t0 > t1) return false;
            }
        }
        return true;
    }
};

}  // namespace harness
