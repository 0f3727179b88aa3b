// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/camera.h>
#include <voxup/mesh.h>

#include <cstdint>
#include <string>
#include <vector>

namespace voxup {

/// Bundled test geometry, already normalized to [-0.5, 0.5]^3.
struct Fixture {
    std::string name;
    TriangleMesh mesh;
    bool closed = true;
};

/// Cube, icospheres (subdivision 1-3), two tori, a tilted plane and three
/// composite scenes.
std::vector<Fixture> standardFixtures();

/// Open plane z = 0 spanning the full cube; lies on a cell boundary at every
/// even resolution.
Fixture alignedPlaneFixture();

/// Looks up any fixture above (or "aligned_plane") by name.
Fixture fixtureByName(const std::string &name);

/// Six closed scenes used for render/stitch checks.
std::vector<Fixture> stitchScenes();

/// `count` orbit cameras around the origin drawn from `seed`.
std::vector<CameraModel> seededCameras(std::uint64_t seed, std::size_t count, int width = 512, int height = 512,
                                       double fovYDegrees = 40.0, double distance = 2.5);

} // namespace voxup
