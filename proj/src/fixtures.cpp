// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>
#include <voxup/fixtures.h>

#include <algorithm>

namespace voxup {

namespace {

TriangleMesh
sphere(int subdivision, double radius = 0.5) {
    PrimitiveParams p;
    p.size = radius;
    p.subdivision = subdivision;
    return makePrimitive(PrimitiveKind::Sphere, p);
}

TriangleMesh
torus(double major, double minor, int rings, int sides) {
    PrimitiveParams p;
    p.majorRadius = major;
    p.minorRadius = minor;
    p.rings = rings;
    p.sides = sides;
    return makePrimitive(PrimitiveKind::Torus, p);
}

TriangleMesh
cube(double size, int subdivision = 0) {
    PrimitiveParams p;
    p.size = size;
    p.subdivision = subdivision;
    return makePrimitive(PrimitiveKind::Cube, p);
}

TriangleMesh
plane(double size, int subdivision) {
    PrimitiveParams p;
    p.size = size;
    p.subdivision = subdivision;
    return makePrimitive(PrimitiveKind::Plane, p);
}

} // namespace

std::vector<Fixture>
standardFixtures() {
    std::vector<Fixture> out;
    out.push_back({"cube", normalizeMesh(cube(1.0)), true});
    out.push_back({"icosphere1", normalizeMesh(sphere(1)), true});
    out.push_back({"icosphere2", normalizeMesh(sphere(2)), true});
    out.push_back({"icosphere3", normalizeMesh(sphere(3)), true});
    out.push_back({"torus", normalizeMesh(torus(0.35, 0.12, 32, 16)), true});
    out.push_back({"torus_fat",
                   normalizeMesh(transformed(torus(0.3, 0.17, 48, 24), rotationAxisAngle({1, 0, 0}, 0.7))), true});
    out.push_back({"tilted_plane", normalizeMesh(transformed(plane(1.0, 3), rotationAxisAngle({1, 2, 0.5}, 0.6))),
                   false});
    out.push_back({"scene_two_spheres",
                   normalizeMesh(merged({transformed(sphere(3, 0.3), Mat3::identity(), {-0.2, 0.0, 0.05}),
                                         transformed(sphere(2, 0.18), Mat3::identity(), {0.3, 0.1, -0.1})})),
                   true});
    out.push_back({"scene_cube_torus",
                   normalizeMesh(merged({transformed(cube(0.35), rotationAxisAngle({1, 1, 0}, 0.5), {-0.25, 0, 0}),
                                         transformed(torus(0.25, 0.08, 40, 16), rotationAxisAngle({0, 1, 0}, 1.1),
                                                     {0.25, 0.05, 0})})),
                   true});
    out.push_back({"scene_stack",
                   normalizeMesh(merged({transformed(cube(0.5, 2), rotationAxisAngle({0, 0, 1}, 0.3), {0, 0, -0.2}),
                                         transformed(sphere(3, 0.2), Mat3::identity(), {0.05, -0.02, 0.25}),
                                         transformed(torus(0.3, 0.05, 48, 12), rotationAxisAngle({1, 0, 0}, 0.2),
                                                     {0, 0, 0.05})})),
                   true});
    return out;
}

Fixture
alignedPlaneFixture() {
    return {"aligned_plane", normalizeMesh(plane(1.0, 0)), false};
}

Fixture
fixtureByName(const std::string &name) {
    if (name == "aligned_plane")
        return alignedPlaneFixture();
    for (Fixture &f : standardFixtures())
        if (f.name == name)
            return f;
    throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

std::vector<Fixture>
stitchScenes() {
    std::vector<Fixture> out;
    for (Fixture &f : standardFixtures())
        if (f.name == "icosphere3" || f.name == "torus" || f.name == "torus_fat" || f.name.starts_with("scene_"))
            out.push_back(std::move(f));
    return out;
}

std::vector<CameraModel>
seededCameras(std::uint64_t seed, std::size_t count, int width, int height, double fovYDegrees, double distance) {
    SplitMix64 rng(seed);
    std::vector<CameraModel> cams;
    for (std::size_t i = 0; i < count; ++i)
        cams.push_back(randomOrbitCamera(rng, width, height, fovYDegrees, distance));
    return cams;
}

} // namespace voxup
