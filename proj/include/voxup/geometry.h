// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

namespace voxup {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(const Vec3 &a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend constexpr Vec3 operator*(double s, const Vec3 &a) { return a * s; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3 &v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3 &v) { return v * (1.0 / length(v)); }

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static constexpr Mat3 identity() { return {}; }

    constexpr double operator()(int r, int c) const { return m[static_cast<size_t>(r * 3 + c)]; }
    constexpr double &operator()(int r, int c) { return m[static_cast<size_t>(r * 3 + c)]; }

    constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }

    friend constexpr Vec3 operator*(const Mat3 &a, const Vec3 &v) {
        return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
    }

    friend constexpr Mat3 operator*(const Mat3 &a, const Mat3 &b) {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
        return out;
    }

    constexpr Mat3 transposed() const {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out(r, c) = (*this)(c, r);
        return out;
    }

    friend constexpr bool operator==(const Mat3 &, const Mat3 &) = default;
};

/// Rotation of `angle` radians about the (not necessarily unit) `axis`.
Mat3 rotationAxisAngle(const Vec3 &axis, double angle);

/// Largest absolute deviation of R^T R from the identity.
double orthonormalityError(const Mat3 &rotation);

struct Aabb {
    Vec3 lo;
    Vec3 hi;
};

/// Closed triangle vs. axis-aligned cube overlap via the 13-axis separating
/// axis test. The cube is centered at `center` with half-extent `halfSize`.
/// Touching counts as overlapping; no epsilon is applied.
bool triangleCubeOverlap(const Vec3 &center, double halfSize, const Vec3 &a, const Vec3 &b, const Vec3 &c);

/// Closest point on triangle (a,b,c) to p.
Vec3 closestPointOnTriangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c);

inline double pointTriangleDistance(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c) {
    return length(p - closestPointOnTriangle(p, a, b, c));
}

} // namespace voxup
