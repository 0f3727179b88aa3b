// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <voxup/geometry.h>
#include <voxup/rng.h>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <vector>

namespace voxup {

/// Pinhole camera in the computer-vision convention: camera x right, y down,
/// z forward. Pixel (u, v) = (fx x/z + cx, fy y/z + cy).
struct CameraModel {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 1;
    int height = 1;
    Mat3 rotation;    // world -> camera
    Vec3 translation; // world -> camera
    double nearDepth = 0.1;
    double farDepth = 10.0;

    /// Throws InvalidArgument on non-positive focal lengths or image size,
    /// bad depth range, or a rotation that is not orthonormal within 1e-9.
    void validate() const;

    Vec3 worldToCamera(const Vec3 &p) const { return rotation * p + translation; }
    Vec3 cameraToWorld(const Vec3 &p) const { return rotation.transposed() * (p - translation); }
    Vec3 center() const { return cameraToWorld({}); }

    friend bool operator==(const CameraModel &, const CameraModel &) = default;
};

struct Projection {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

/// Empty when the point is at or behind the camera plane (z <= 0).
std::optional<Projection> project(const CameraModel &camera, const Vec3 &worldPoint);

/// Inverse of project for a pixel position and camera-space depth.
Vec3 unproject(const CameraModel &camera, double u, double v, double depth);

/// Camera at `eye` looking at `target`; `up` fixes the roll. Principal point
/// at the image center.
CameraModel lookAt(const Vec3 &eye, const Vec3 &target, const Vec3 &up, double fovYDegrees, int width, int height,
                   double nearDepth, double farDepth);

/// Camera on a sphere of radius `distance` around the origin, looking at the
/// origin, with direction and roll drawn from `rng`.
CameraModel randomOrbitCamera(SplitMix64 &rng, int width, int height, double fovYDegrees, double distance);

nlohmann::json cameraToJson(const CameraModel &camera);
CameraModel cameraFromJson(const nlohmann::json &j);

/// Accepts a single camera object, an array of cameras, or {"cameras": [...]}.
std::vector<CameraModel> loadCameras(const std::filesystem::path &path);

} // namespace voxup
