// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/mesh.h>

#include "binary_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string_view>

namespace voxup {

namespace {

constexpr char kMeshMagic[4] = {'V', 'M', 'S', 'H'};
constexpr std::uint32_t kMeshVersion = 1;

double
longestExtent(const Aabb &box) {
    return std::max({box.hi.x - box.lo.x, box.hi.y - box.lo.y, box.hi.z - box.lo.z});
}

std::string_view
trim(std::string_view s) {
    const auto isSpace = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && isSpace(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && isSpace(s.back()))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view>
splitWhitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void
parseError(const std::string &source, std::size_t line, const std::string &what) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

double
parseDouble(std::string_view token, const std::string &source, std::size_t line) {
    // std::from_chars for double is available in libstdc++ 11.
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
        parseError(source, line, "malformed number '" + std::string(token) + "'");
    return value;
}

} // namespace

Aabb
boundingBox(const TriangleMesh &mesh) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Aabb box{{inf, inf, inf}, {-inf, -inf, -inf}};
    for (const Vec3 &v : mesh.vertices) {
        for (int i = 0; i < 3; ++i) {
            box.lo[i] = std::min(box.lo[i], v[i]);
            box.hi[i] = std::max(box.hi[i], v[i]);
        }
    }
    return box;
}

std::size_t
dropDegenerateTriangles(TriangleMesh &mesh) {
    if (mesh.triangles.empty())
        return 0;
    const double extent = longestExtent(boundingBox(mesh));
    const std::size_t before = mesh.triangles.size();
    if (!(extent > 0.0)) {
        mesh.triangles.clear();
        return before;
    }
    const double invArea = 1.0 / (extent * extent);
    std::erase_if(mesh.triangles, [&](const TriangleIndices &t) {
        const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        const double area = 0.5 * length(cross(b - a, c - a)) * invArea;
        return !(area > kDegenerateAreaTolerance);
    });
    return before - mesh.triangles.size();
}

TriangleMesh
parseObj(std::istream &in, const std::string &sourceName, MeshLoadReport *report) {
    TriangleMesh mesh;
    std::vector<std::size_t> faceLines;
    std::string raw;
    std::size_t lineNo = 0;
    // Raw (possibly negative) OBJ indices, resolved after the whole file is read.
    std::vector<std::array<long long, 3>> rawFaces;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string_view line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty())
            continue;
        const auto tokens = splitWhitespace(line);
        if (tokens[0] == "v") {
            if (tokens.size() < 4)
                parseError(sourceName, lineNo, "vertex needs three coordinates");
            mesh.vertices.push_back({parseDouble(tokens[1], sourceName, lineNo),
                                     parseDouble(tokens[2], sourceName, lineNo),
                                     parseDouble(tokens[3], sourceName, lineNo)});
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4)
                parseError(sourceName, lineNo, "face needs at least three vertices");
            std::vector<long long> poly;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string_view tok = tokens[i].substr(0, tokens[i].find('/'));
                long long idx = 0;
                const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
                if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
                    parseError(sourceName, lineNo, "malformed face index '" + std::string(tokens[i]) + "'");
                if (idx == 0)
                    parseError(sourceName, lineNo, "face index 0 is invalid (OBJ indices are 1-based)");
                // Negative indices are relative to the vertices read so far.
                if (idx < 0)
                    idx = static_cast<long long>(mesh.vertices.size()) + idx + 1;
                poly.push_back(idx - 1);
            }
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
                rawFaces.push_back({poly[0], poly[i], poly[i + 1]});
                faceLines.push_back(lineNo);
            }
        }
        // Normals, texture coordinates, groups and materials are ignored.
    }
    if (in.bad())
        throw Error(ErrorCode::IoError, sourceName + ": read failure");

    const auto count = static_cast<long long>(mesh.vertices.size());
    mesh.triangles.reserve(rawFaces.size());
    for (std::size_t f = 0; f < rawFaces.size(); ++f) {
        TriangleIndices tri{};
        for (int k = 0; k < 3; ++k) {
            const long long idx = rawFaces[f][static_cast<size_t>(k)];
            if (idx < 0 || idx >= count)
                parseError(sourceName, faceLines[f],
                           "face index " + std::to_string(idx + 1) + " out of range (" +
                               std::to_string(count) + " vertices)");
            tri[static_cast<size_t>(k)] = static_cast<std::uint32_t>(idx);
        }
        mesh.triangles.push_back(tri);
    }

    const std::size_t dropped = dropDegenerateTriangles(mesh);
    if (report)
        report->degenerateDropped = dropped;
    return mesh;
}

namespace {

TriangleMesh
loadBinaryMesh(std::istream &in, const std::string &source) {
    BinaryReader reader(in, source);
    reader.expectMagic(kMeshMagic);
    const auto version = reader.read<std::uint32_t>();
    if (version != kMeshVersion)
        throw Error(ErrorCode::ParseError, source + ": unsupported VMSH version " + std::to_string(version));
    const auto nv = reader.read<std::uint64_t>();
    const auto nt = reader.read<std::uint64_t>();
    TriangleMesh mesh;
    mesh.vertices.resize(reader.checkedCount(nv, 24));
    for (Vec3 &v : mesh.vertices) {
        v.x = reader.read<double>();
        v.y = reader.read<double>();
        v.z = reader.read<double>();
    }
    mesh.triangles.resize(reader.checkedCount(nt, 12));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        for (auto &idx : mesh.triangles[t]) {
            idx = reader.read<std::uint32_t>();
            if (idx >= nv)
                throw Error(ErrorCode::ParseError,
                            source + ": triangle " + std::to_string(t) + " index out of range");
        }
    }
    return mesh;
}

} // namespace

TriangleMesh
loadMesh(const std::filesystem::path &path, MeshLoadReport *report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    char magic[4] = {};
    in.read(magic, 4);
    const bool binary = in.gcount() == 4 && std::equal(magic, magic + 4, kMeshMagic);
    in.clear();
    in.seekg(0);
    if (!binary)
        return parseObj(in, path.string(), report);

    TriangleMesh mesh = loadBinaryMesh(in, path.string());
    const std::size_t dropped = dropDegenerateTriangles(mesh);
    if (report)
        report->degenerateDropped = dropped;
    return mesh;
}

void
saveMeshBinary(const TriangleMesh &mesh, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    BinaryWriter writer(out);
    writer.writeMagic(kMeshMagic);
    writer.write<std::uint32_t>(kMeshVersion);
    writer.write<std::uint64_t>(mesh.vertices.size());
    writer.write<std::uint64_t>(mesh.triangles.size());
    for (const Vec3 &v : mesh.vertices) {
        writer.write(v.x);
        writer.write(v.y);
        writer.write(v.z);
    }
    for (const auto &t : mesh.triangles)
        for (auto idx : t)
            writer.write<std::uint32_t>(idx);
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void
saveObj(const TriangleMesh &mesh, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.precision(17);
    for (const Vec3 &v : mesh.vertices)
        out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto &t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

bool
isNormalized(const TriangleMesh &mesh, double tolerance) {
    const double bound = 0.5 + tolerance;
    return std::all_of(mesh.vertices.begin(), mesh.vertices.end(), [&](const Vec3 &v) {
        return std::abs(v.x) <= bound && std::abs(v.y) <= bound && std::abs(v.z) <= bound;
    });
}

TriangleMesh
normalizeMesh(const TriangleMesh &mesh) {
    if (mesh.vertices.empty() || mesh.triangles.empty())
        throw Error(ErrorCode::InvalidArgument, "cannot normalize an empty mesh");
    const Aabb box = boundingBox(mesh);
    const double extent = longestExtent(box);
    if (!(extent > 0.0))
        throw Error(ErrorCode::InvalidArgument, "cannot normalize a mesh with zero-extent bounding box");

    const Vec3 center = (box.lo + box.hi) * 0.5;
    // A mesh that is canonical up to roundoff is returned unchanged, which
    // makes normalization exactly idempotent.
    constexpr double canonicalTol = 1e-12;
    if (std::abs(extent - 1.0) <= canonicalTol && std::abs(center.x) <= canonicalTol &&
        std::abs(center.y) <= canonicalTol && std::abs(center.z) <= canonicalTol && isNormalized(mesh, 0.0))
        return mesh;

    const double scale = 1.0 / extent;
    TriangleMesh out = mesh;
    for (Vec3 &v : out.vertices) {
        v = (v - center) * scale;
        for (int i = 0; i < 3; ++i)
            v[i] = std::clamp(v[i], -0.5, 0.5);
    }
    return out;
}

namespace {

// Lattice-based watertight cube with n segments per edge.
TriangleMesh
makeCube(double size, int n) {
    TriangleMesh mesh;
    std::map<std::array<int, 3>, std::uint32_t> index;
    const auto vertexAt = [&](std::array<int, 3> key) {
        auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
        if (inserted)
            mesh.vertices.push_back({(static_cast<double>(key[0]) / n - 0.5) * size,
                                     (static_cast<double>(key[1]) / n - 0.5) * size,
                                     (static_cast<double>(key[2]) / n - 0.5) * size});
        return it->second;
    };
    for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3, v = (axis + 2) % 3;
        for (int side : {0, n}) {
            const double outward = side == 0 ? -1.0 : 1.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    std::array<int, 3> k00{}, k10{}, k11{}, k01{};
                    k00[axis] = k10[axis] = k11[axis] = k01[axis] = side;
                    k00[u] = i;     k00[v] = j;
                    k10[u] = i + 1; k10[v] = j;
                    k11[u] = i + 1; k11[v] = j + 1;
                    k01[u] = i;     k01[v] = j + 1;
                    std::uint32_t a = vertexAt(k00), b = vertexAt(k10), c = vertexAt(k11), d = vertexAt(k01);
                    // u x v is +axis, so the winding a,b,c faces +axis.
                    if (outward < 0.0)
                        std::swap(b, d);
                    mesh.triangles.push_back({a, b, c});
                    mesh.triangles.push_back({a, c, d});
                }
            }
        }
    }
    return mesh;
}

TriangleMesh
makeIcosphere(double radius, int levels) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                               {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3 &v : verts)
        v = normalized(v);
    std::vector<TriangleIndices> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                          {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                          {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                          {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int level = 0; level < levels; ++level) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = midpoints.try_emplace({key.first, key.second},
                                                        static_cast<std::uint32_t>(verts.size()));
            if (inserted)
                verts.push_back(normalized((verts[a] + verts[b]) * 0.5));
            return it->second;
        };
        std::vector<TriangleIndices> next;
        next.reserve(faces.size() * 4);
        for (const auto &f : faces) {
            const std::uint32_t ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    TriangleMesh mesh;
    mesh.vertices.reserve(verts.size());
    for (const Vec3 &v : verts)
        mesh.vertices.push_back(v * radius);
    mesh.triangles = std::move(faces);
    return mesh;
}

TriangleMesh
makeTorus(double major, double minor, int rings, int sides) {
    TriangleMesh mesh;
    const double twoPi = 2.0 * std::numbers::pi;
    for (int i = 0; i < rings; ++i) {
        const double u = twoPi * i / rings;
        for (int j = 0; j < sides; ++j) {
            const double v = twoPi * j / sides;
            const double r = major + minor * std::cos(v);
            mesh.vertices.push_back({r * std::cos(u), r * std::sin(u), minor * std::sin(v)});
        }
    }
    const auto at = [&](int i, int j) {
        return static_cast<std::uint32_t>((i % rings) * sides + (j % sides));
    };
    for (int i = 0; i < rings; ++i) {
        for (int j = 0; j < sides; ++j) {
            mesh.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            mesh.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
    return mesh;
}

TriangleMesh
makePlane(double size, int n) {
    TriangleMesh mesh;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({(static_cast<double>(i) / n - 0.5) * size,
                                     (static_cast<double>(j) / n - 0.5) * size, 0.0});
    const auto at = [&](int i, int j) { return static_cast<std::uint32_t>(j * (n + 1) + i); };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            mesh.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            mesh.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
    return mesh;
}

} // namespace

TriangleMesh
makePrimitive(PrimitiveKind kind, const PrimitiveParams &params) {
    if (params.subdivision < 0)
        throw Error(ErrorCode::InvalidArgument, "subdivision must be >= 0");
    switch (kind) {
    case PrimitiveKind::Cube:
    case PrimitiveKind::Plane:
    case PrimitiveKind::Sphere:
        if (!(params.size > 0.0))
            throw Error(ErrorCode::InvalidArgument, "primitive size must be positive");
        break;
    case PrimitiveKind::Torus:
        if (!(params.minorRadius > 0.0) || !(params.majorRadius > params.minorRadius))
            throw Error(ErrorCode::InvalidArgument, "torus needs 0 < minor radius < major radius");
        if (params.rings < 3 || params.sides < 3)
            throw Error(ErrorCode::InvalidArgument, "torus needs at least 3 rings and 3 sides");
        break;
    }
    switch (kind) {
    case PrimitiveKind::Cube: return makeCube(params.size, params.subdivision + 1);
    case PrimitiveKind::Sphere:
        if (params.subdivision > 10)
            throw Error(ErrorCode::InvalidArgument, "icosphere subdivision above 10 is not supported");
        return makeIcosphere(params.size, params.subdivision);
    case PrimitiveKind::Torus:
        return makeTorus(params.majorRadius, params.minorRadius, params.rings, params.sides);
    case PrimitiveKind::Plane: return makePlane(params.size, params.subdivision + 1);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown primitive kind");
}

TriangleMesh
transformed(const TriangleMesh &mesh, const Mat3 &rotation, const Vec3 &translation, double scale) {
    TriangleMesh out = mesh;
    for (Vec3 &v : out.vertices)
        v = rotation * (v * scale) + translation;
    return out;
}

TriangleMesh
merged(const std::vector<TriangleMesh> &parts) {
    TriangleMesh out;
    for (const TriangleMesh &part : parts) {
        const auto base = static_cast<std::uint32_t>(out.vertices.size());
        out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
        for (const auto &t : part.triangles)
            out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    return out;
}

} // namespace voxup
