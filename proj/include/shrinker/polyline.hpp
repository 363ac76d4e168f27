#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "finite_difference.hpp"

namespace shrinker {

using Polyline = std::vector<CurvePoint>;

namespace geom {

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

inline double point_segment_distance(const CurvePoint& p, const CurvePoint& a, const CurvePoint& b, CurvePoint* closest = nullptr) {
    const double dx = b.r - a.r, dz = b.z - a.z;
    const double len2 = dx * dx + dz * dz;
    double s = len2 > 0.0 ? ((p.r - a.r) * dx + (p.z - a.z) * dz) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const CurvePoint c{a.r + s * dx, a.z + s * dz};
    if (closest) *closest = c;
    return std::hypot(p.r - c.r, p.z - c.z);
}

inline bool segments_intersect(const CurvePoint& a, const CurvePoint& b, const CurvePoint& c, const CurvePoint& d) {
    const double d1 = cross(b.r - a.r, b.z - a.z, c.r - a.r, c.z - a.z);
    const double d2 = cross(b.r - a.r, b.z - a.z, d.r - a.r, d.z - a.z);
    const double d3 = cross(d.r - c.r, d.z - c.z, a.r - c.r, a.z - c.z);
    const double d4 = cross(d.r - c.r, d.z - c.z, b.r - c.r, b.z - c.z);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

struct SegmentContact {
    double distance = std::numeric_limits<double>::infinity();
    CurvePoint on_a, on_b;
    std::size_t seg_a = 0, seg_b = 0;
    bool crossing = false;
};

inline SegmentContact segment_distance(const CurvePoint& a, const CurvePoint& b, const CurvePoint& c, const CurvePoint& d) {
    SegmentContact out;
    if (segments_intersect(a, b, c, d)) {
        out.distance = 0.0;
        out.crossing = true;
        const double t = cross(c.r - a.r, c.z - a.z, d.r - c.r, d.z - c.z) /
                         cross(b.r - a.r, b.z - a.z, d.r - c.r, d.z - c.z);
        out.on_a = out.on_b = {a.r + t * (b.r - a.r), a.z + t * (b.z - a.z)};
        return out;
    }
    CurvePoint q;
    auto consider = [&](double dist, CurvePoint pa, CurvePoint pb) {
        if (dist < out.distance) {
            out.distance = dist;
            out.on_a = pa;
            out.on_b = pb;
        }
    };
    consider(point_segment_distance(a, c, d, &q), a, q);
    consider(point_segment_distance(b, c, d, &q), b, q);
    consider(point_segment_distance(c, a, b, &q), q, c);
    consider(point_segment_distance(d, a, b, &q), q, d);
    return out;
}

/// Minimum distance between two polylines (0 with crossing = true when they intersect).
inline SegmentContact polyline_distance(const Polyline& A, const Polyline& B) {
    SegmentContact best;
    for (std::size_t i = 0; i + 1 < A.size(); ++i) {
        const double ar0 = std::min(A[i].r, A[i + 1].r), ar1 = std::max(A[i].r, A[i + 1].r);
        const double az0 = std::min(A[i].z, A[i + 1].z), az1 = std::max(A[i].z, A[i + 1].z);
        for (std::size_t j = 0; j + 1 < B.size(); ++j) {
            const double gap_r = std::max({0.0, std::min(B[j].r, B[j + 1].r) - ar1, ar0 - std::max(B[j].r, B[j + 1].r)});
            const double gap_z = std::max({0.0, std::min(B[j].z, B[j + 1].z) - az1, az0 - std::max(B[j].z, B[j + 1].z)});
            if (std::hypot(gap_r, gap_z) >= best.distance) continue;
            SegmentContact c = segment_distance(A[i], A[i + 1], B[j], B[j + 1]);
            if (c.distance < best.distance || (c.crossing && !best.crossing)) {
                c.seg_a = i;
                c.seg_b = j;
                best = c;
                if (best.crossing) return best;
            }
        }
    }
    return best;
}

inline double point_polyline_distance(const CurvePoint& p, const Polyline& B) {
    double best = std::numeric_limits<double>::infinity();
    if (B.size() == 1) return std::hypot(p.r - B[0].r, p.z - B[0].z);
    for (std::size_t j = 0; j + 1 < B.size(); ++j) best = std::min(best, point_segment_distance(p, B[j], B[j + 1]));
    return best;
}

/// Distance from a polyline to the closed rectangle [r0, r1] x [z0, z1] (0 if they meet).
inline double polyline_rectangle_distance(const Polyline& A, double r0, double r1, double z0, double z1) {
    for (const CurvePoint& p : A)
        if (p.r >= r0 && p.r <= r1 && p.z >= z0 && p.z <= z1) return 0.0;
    const Polyline box{{r0, z0}, {r1, z0}, {r1, z1}, {r0, z1}, {r0, z0}};
    return polyline_distance(A, box).distance;
}

/// Unit normal of the polyline at vertex i: the averaged tangent rotated by +90 degrees.
inline CurvePoint vertex_normal(const Polyline& A, std::size_t i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(i + 1, A.size() - 1);
    const double dr = A[hi].r - A[lo].r, dz = A[hi].z - A[lo].z;
    const double len = std::hypot(dr, dz);
    if (len == 0.0) return {0.0, 0.0};
    return {-dz / len, dr / len};
}

inline CurvePoint segment_normal(const Polyline& A, std::size_t i) {
    const double dr = A[i + 1].r - A[i].r, dz = A[i + 1].z - A[i].z;
    const double len = std::hypot(dr, dz);
    if (len == 0.0) return {0.0, 0.0};
    return {-dz / len, dr / len};
}

}  // namespace geom
}  // namespace shrinker
