// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include "test_main_paths.h"

#include <voxup/error.h>
#include <voxup/mesh.h>

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

using namespace voxup;

namespace {

const char *kCubeObj = R"(# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
vn 0 0 1
vt 0 0
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
)";

TriangleMesh
parse(const std::string &text, MeshLoadReport *report = nullptr) {
    std::istringstream in(text);
    return parseObj(in, "test.obj", report);
}

ErrorCode
parseErrorCode(const std::string &text, std::string *message = nullptr) {
    try {
        parse(text);
    } catch (const Error &e) {
        if (message)
            *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::IoError;
}

void
expectBox(const TriangleMesh &m, Vec3 lo, Vec3 hi) {
    const Aabb box = boundingBox(m);
    for (int i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(box.lo[i], lo[i]);
        EXPECT_DOUBLE_EQ(box.hi[i], hi[i]);
    }
}

} // namespace

TEST(MeshIo, ObjCubeCounts) {
    const TriangleMesh m = parse(kCubeObj);
    EXPECT_EQ(m.vertexCount(), 8u);
    EXPECT_EQ(m.triangleCount(), 12u);
}

TEST(MeshIo, ObjSlashTokensNegativeIndicesAndQuads) {
    const TriangleMesh m = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1/1 2//1 3/2 4\nf -4 -3 -2\n");
    ASSERT_EQ(m.triangleCount(), 3u);
    EXPECT_EQ(m.triangles[0], (TriangleIndices{0, 1, 2}));
    EXPECT_EQ(m.triangles[1], (TriangleIndices{0, 2, 3}));
    EXPECT_EQ(m.triangles[2], (TriangleIndices{0, 1, 2}));
}

TEST(MeshIo, ObjIndexZeroIsParseErrorWithLine) {
    std::string msg;
    EXPECT_EQ(parseErrorCode("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n", &msg), ErrorCode::ParseError);
    EXPECT_NE(msg.find(":4"), std::string::npos) << msg;
}

TEST(MeshIo, ObjOutOfRangeAndMalformed) {
    std::string msg;
    EXPECT_EQ(parseErrorCode("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n", &msg), ErrorCode::ParseError);
    EXPECT_NE(msg.find(":4"), std::string::npos) << msg;
    EXPECT_EQ(parseErrorCode("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2\n"), ErrorCode::ParseError);
    EXPECT_EQ(parseErrorCode("v 0 zero 0\n"), ErrorCode::ParseError);
    EXPECT_EQ(parseErrorCode("v 0 0 0\nf 1 x 1\n"), ErrorCode::ParseError);
}

TEST(MeshIo, DegenerateTrianglesDroppedAndCounted) {
    MeshLoadReport report;
    const TriangleMesh m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\nf 1 2 3\nf 1 2 4\nf 1 1 3\n", &report);
    EXPECT_EQ(m.triangleCount(), 1u);
    EXPECT_EQ(report.degenerateDropped, 2u);
}

TEST(MeshIo, LoadMissingFile) {
    try {
        loadMesh("/definitely/not/here.obj");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    }
}

TEST(MeshIo, LoadObjFromDisk) {
    const auto dir = test::scratchDir("mesh_obj");
    std::ofstream(dir / "cube.obj") << kCubeObj;
    const TriangleMesh m = loadMesh(dir / "cube.obj");
    EXPECT_EQ(m.triangleCount(), 12u);
}

TEST(MeshIo, NormalizeCubeCorners) {
    const TriangleMesh m = normalizeMesh(
        transformed(makePrimitive(PrimitiveKind::Cube), Mat3::identity(), {1, 1, 1}, 2.0));
    expectBox(m, {-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
}

TEST(MeshIo, NormalizePreservesAspect) {
    TriangleMesh box = makePrimitive(PrimitiveKind::Cube);
    for (Vec3 &v : box.vertices)
        v = {v.x * 4.0 + 3.0, v.y * 2.0 - 1.0, v.z * 2.0};
    const TriangleMesh m = normalizeMesh(box);
    expectBox(m, {-0.5, -0.25, -0.25}, {0.5, 0.25, 0.25});
}

TEST(MeshIo, NormalizeIdempotent) {
    TriangleMesh torus = transformed(makePrimitive(PrimitiveKind::Torus), rotationAxisAngle({1, 2, 3}, 0.7),
                                     {0.3, -2, 5}, 3.7);
    const TriangleMesh once = normalizeMesh(torus);
    EXPECT_EQ(normalizeMesh(once), once);
    EXPECT_TRUE(isNormalized(once));
}

TEST(MeshIo, NormalizeErrors) {
    EXPECT_THROW(normalizeMesh(TriangleMesh{}), Error);
    TriangleMesh point;
    point.vertices = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    point.triangles = {{0, 1, 2}};
    EXPECT_THROW(normalizeMesh(point), Error);
}

TEST(MeshIo, NormalizeCommutesWithRotationUpToRefit) {
    const TriangleMesh sphere = makePrimitive(PrimitiveKind::Sphere, {.size = 1.0, .subdivision = 2});
    const Mat3 rot = rotationAxisAngle({0, 0, 1}, 0.5 * 3.14159265358979323846);
    const TriangleMesh a = normalizeMesh(transformed(normalizeMesh(sphere), rot));
    const TriangleMesh b = normalizeMesh(transformed(sphere, rot));
    ASSERT_EQ(a.vertexCount(), b.vertexCount());
    for (std::size_t i = 0; i < a.vertexCount(); ++i)
        EXPECT_NEAR(length(a.vertices[i] - b.vertices[i]), 0.0, 1e-12);
}

TEST(MeshIo, PrimitiveCounts) {
    EXPECT_EQ(makePrimitive(PrimitiveKind::Cube).triangleCount(), 12u);
    for (int n = 0; n <= 4; ++n) {
        const TriangleMesh s = makePrimitive(PrimitiveKind::Sphere, {.subdivision = n});
        const std::size_t pow4 = std::size_t{1} << (2 * n);
        EXPECT_EQ(s.triangleCount(), 20 * pow4);
        EXPECT_EQ(s.vertexCount(), 10 * pow4 + 2);
    }
    const TriangleMesh ico3 = makePrimitive(PrimitiveKind::Sphere, {.subdivision = 3});
    EXPECT_EQ(ico3.vertexCount(), 642u);
    EXPECT_EQ(ico3.triangleCount(), 1280u);
    EXPECT_EQ(makePrimitive(PrimitiveKind::Torus).triangleCount(), 1024u);
    EXPECT_THROW(makePrimitive(PrimitiveKind::Sphere, {.subdivision = -1}), Error);
}

TEST(MeshIo, ClosedPrimitivesAreWatertight) {
    // Every undirected edge of a closed manifold is shared by exactly two triangles, once per direction.
    for (PrimitiveKind kind : {PrimitiveKind::Cube, PrimitiveKind::Sphere, PrimitiveKind::Torus}) {
        for (int sub : {0, 2}) {
            const TriangleMesh m = makePrimitive(kind, {.subdivision = sub});
            std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
            for (const auto &t : m.triangles)
                for (int e = 0; e < 3; ++e)
                    ++directed[{t[e], t[(e + 1) % 3]}];
            for (const auto &[edge, count] : directed) {
                EXPECT_EQ(count, 1);
                EXPECT_EQ(directed.count({edge.second, edge.first}), 1u);
            }
        }
    }
}

TEST(MeshIo, BinaryRoundTripBitExact) {
    const auto dir = test::scratchDir("mesh_bin");
    TriangleMesh m = transformed(makePrimitive(PrimitiveKind::Torus), rotationAxisAngle({1, 1, 0}, 0.3), {0.1, 0.2, 0.3});
    saveMeshBinary(m, dir / "t.vmsh");
    EXPECT_EQ(loadMesh(dir / "t.vmsh"), m);

    std::ifstream in(dir / "t.vmsh", std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "VMSH");
    EXPECT_EQ(std::filesystem::file_size(dir / "t.vmsh"),
              4 + 4 + 8 + 8 + m.vertexCount() * 24 + m.triangleCount() * 12);
}

TEST(MeshIo, BinaryTruncatedIsError) {
    const auto dir = test::scratchDir("mesh_trunc");
    saveMeshBinary(makePrimitive(PrimitiveKind::Cube), dir / "c.vmsh");
    std::filesystem::resize_file(dir / "c.vmsh", 40);
    EXPECT_THROW(loadMesh(dir / "c.vmsh"), Error);
}

TEST(MeshIo, ObjSaveReload) {
    const auto dir = test::scratchDir("mesh_objsave");
    const TriangleMesh m = makePrimitive(PrimitiveKind::Sphere, {.subdivision = 1});
    saveObj(m, dir / "s.obj");
    EXPECT_EQ(loadMesh(dir / "s.obj"), m);
}
