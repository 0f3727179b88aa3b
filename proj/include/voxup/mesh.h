// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/geometry.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace voxup {

using TriangleIndices = std::array<std::uint32_t, 3>;

/// Indexed triangle soup. Indices always reference valid vertices.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<TriangleIndices> triangles;

    std::size_t vertexCount() const { return vertices.size(); }
    std::size_t triangleCount() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }

    friend bool operator==(const TriangleMesh &, const TriangleMesh &) = default;
};

struct MeshLoadReport {
    std::size_t degenerateDropped = 0;
};

/// Triangles whose area, measured in the normalized frame (longest AABB side
/// scaled to 1), does not exceed this are considered degenerate.
inline constexpr double kDegenerateAreaTolerance = 1e-12;

/// Normalized meshes may exceed the unit cube by at most this much.
inline constexpr double kNormalizedTolerance = 1e-9;

Aabb boundingBox(const TriangleMesh &mesh);

/// Loads an OBJ file (v/f records only) or a binary "VMSH" mesh. The format
/// is detected from the file's magic bytes. Degenerate triangles are dropped
/// and counted in `report`.
TriangleMesh loadMesh(const std::filesystem::path &path, MeshLoadReport *report = nullptr);

/// Parses OBJ text. `sourceName` only appears in error messages.
TriangleMesh parseObj(std::istream &in, const std::string &sourceName, MeshLoadReport *report = nullptr);

void saveMeshBinary(const TriangleMesh &mesh, const std::filesystem::path &path);
void saveObj(const TriangleMesh &mesh, const std::filesystem::path &path);

/// Removes triangles with (normalized-frame) area <= kDegenerateAreaTolerance
/// and returns how many were removed.
std::size_t dropDegenerateTriangles(TriangleMesh &mesh);

/// Uniform scale + translation so the tight AABB is centered at the origin
/// with its longest side equal to 1.
TriangleMesh normalizeMesh(const TriangleMesh &mesh);

bool isNormalized(const TriangleMesh &mesh, double tolerance = kNormalizedTolerance);

enum class PrimitiveKind { Cube, Sphere, Torus, Plane };

struct PrimitiveParams {
    /// Cube edge length / sphere radius / plane edge length.
    double size = 1.0;
    /// Cube and plane: faces split into (subdivision+1)^2 quads.
    /// Sphere: icosahedron subdivision level.
    int subdivision = 0;
    double majorRadius = 0.35;
    double minorRadius = 0.12;
    int rings = 32;
    int sides = 16;
};

/// Watertight cube/sphere/torus, or an open square plane in z = 0. All are
/// centered at the origin.
TriangleMesh makePrimitive(PrimitiveKind kind, const PrimitiveParams &params = {});

TriangleMesh transformed(const TriangleMesh &mesh, const Mat3 &rotation, const Vec3 &translation = {},
                         double scale = 1.0);

/// Concatenates meshes into one triangle soup.
TriangleMesh merged(const std::vector<TriangleMesh> &parts);

} // namespace voxup
