// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/geometry.h>

#include <algorithm>

namespace voxup {

Mat3
rotationAxisAngle(const Vec3 &axis, double angle) {
    const Vec3 u = normalized(axis);
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r.m = {t * u.x * u.x + c,       t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
           t * u.x * u.y + s * u.z, t * u.y * u.y + c,       t * u.y * u.z - s * u.x,
           t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c};
    return r;
}

double
orthonormalityError(const Mat3 &rotation) {
    const Mat3 p = rotation.transposed() * rotation;
    double err = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            err = std::max(err, std::abs(p(r, c) - (r == c ? 1.0 : 0.0)));
    return err;
}

namespace {

// Projects the three vertices onto `axis` and checks them against the cube's
// projected radius. Returns true when the axis separates.
inline bool
separatedOnAxis(const Vec3 &axis, double halfSize, const Vec3 &v0, const Vec3 &v1, const Vec3 &v2) {
    const double p0 = dot(axis, v0), p1 = dot(axis, v1), p2 = dot(axis, v2);
    const double rad = halfSize * (std::abs(axis.x) + std::abs(axis.y) + std::abs(axis.z));
    const double lo = std::min({p0, p1, p2});
    const double hi = std::max({p0, p1, p2});
    return lo > rad || hi < -rad;
}

} // namespace

bool
triangleCubeOverlap(const Vec3 &center, double halfSize, const Vec3 &a, const Vec3 &b, const Vec3 &c) {
    const Vec3 v0 = a - center, v1 = b - center, v2 = c - center;

    // Cube face normals.
    for (int i = 0; i < 3; ++i) {
        const double lo = std::min({v0[i], v1[i], v2[i]});
        const double hi = std::max({v0[i], v1[i], v2[i]});
        if (lo > halfSize || hi < -halfSize)
            return false;
    }

    const Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;

    // Triangle plane.
    const Vec3 n = cross(e0, e1);
    const double r = halfSize * (std::abs(n.x) + std::abs(n.y) + std::abs(n.z));
    if (std::abs(dot(n, v0)) > r)
        return false;

    // Edge cross products.
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3 &e : {e0, e1, e2})
        for (const Vec3 &u : axes)
            if (separatedOnAxis(cross(u, e), halfSize, v0, v1, v2))
                return false;

    return true;
}

Vec3
closestPointOnTriangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0)
        return a;

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3)
        return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
        return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6)
        return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
        return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

} // namespace voxup
