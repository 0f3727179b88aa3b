// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/camera.h>
#include <voxup/error.h>

#include <cmath>
#include <fstream>
#include <numbers>

namespace voxup {

void
CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw Error(ErrorCode::InvalidArgument, "camera focal lengths must be positive");
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidArgument, "camera image must be at least 1x1");
    if (!(nearDepth > 0.0) || !(farDepth > nearDepth))
        throw Error(ErrorCode::InvalidArgument, "camera needs 0 < near < far");
    if (!(orthonormalityError(rotation) <= 1e-9))
        throw Error(ErrorCode::InvalidArgument, "camera rotation is not orthonormal");
    const double det = dot(rotation.row(0), cross(rotation.row(1), rotation.row(2)));
    if (!(det > 0.0))
        throw Error(ErrorCode::InvalidArgument, "camera rotation is a reflection");
}

std::optional<Projection>
project(const CameraModel &camera, const Vec3 &worldPoint) {
    const Vec3 p = camera.worldToCamera(worldPoint);
    if (p.z <= 0.0)
        return std::nullopt;
    return Projection{camera.fx * p.x / p.z + camera.cx, camera.fy * p.y / p.z + camera.cy, p.z};
}

Vec3
unproject(const CameraModel &camera, double u, double v, double depth) {
    const Vec3 p{(u - camera.cx) / camera.fx * depth, (v - camera.cy) / camera.fy * depth, depth};
    return camera.cameraToWorld(p);
}

CameraModel
lookAt(const Vec3 &eye, const Vec3 &target, const Vec3 &up, double fovYDegrees, int width, int height,
       double nearDepth, double farDepth) {
    const Vec3 forward = normalized(target - eye);
    const Vec3 side = cross(forward, up);
    if (!(length(side) > 1e-12))
        throw Error(ErrorCode::InvalidArgument, "lookAt up vector is parallel to the view direction");
    if (!(fovYDegrees > 0.0 && fovYDegrees < 180.0))
        throw Error(ErrorCode::InvalidArgument, "field of view must lie in (0, 180) degrees");
    const Vec3 right = normalized(side);
    const Vec3 down = cross(forward, right);

    CameraModel cam;
    cam.width = width;
    cam.height = height;
    cam.fy = 0.5 * height / std::tan(0.5 * fovYDegrees * std::numbers::pi / 180.0);
    cam.fx = cam.fy;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    cam.rotation.m = {right.x, right.y, right.z, down.x, down.y, down.z, forward.x, forward.y, forward.z};
    cam.translation = -(cam.rotation * eye);
    cam.nearDepth = nearDepth;
    cam.farDepth = farDepth;
    cam.validate();
    return cam;
}

CameraModel
randomOrbitCamera(SplitMix64 &rng, int width, int height, double fovYDegrees, double distance) {
    // Uniform direction on the sphere.
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 dir{s * std::cos(phi), s * std::sin(phi), z};

    Vec3 up;
    do {
        up = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    } while (length(cross(dir, up)) < 0.1 * length(up) || length(up) < 0.1);

    const double near = std::max(0.05, distance - 1.0);
    return lookAt(dir * distance, {}, up, fovYDegrees, width, height, near, distance + 1.0);
}

nlohmann::json
cameraToJson(const CameraModel &camera) {
    const Mat3 &r = camera.rotation;
    return {
        {"fx", camera.fx},
        {"fy", camera.fy},
        {"cx", camera.cx},
        {"cy", camera.cy},
        {"width", camera.width},
        {"height", camera.height},
        {"rotation", {{r(0, 0), r(0, 1), r(0, 2)}, {r(1, 0), r(1, 1), r(1, 2)}, {r(2, 0), r(2, 1), r(2, 2)}}},
        {"translation", {camera.translation.x, camera.translation.y, camera.translation.z}},
        {"near", camera.nearDepth},
        {"far", camera.farDepth},
    };
}

namespace {

Vec3
vecFromJson(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::ParseError, "expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

CameraModel
cameraFromJson(const nlohmann::json &j) {
    try {
        if (j.contains("eye")) {
            return lookAt(vecFromJson(j.at("eye")), vecFromJson(j.value("target", nlohmann::json{0, 0, 0})),
                          vecFromJson(j.value("up", nlohmann::json{0, 1, 0})), j.at("fov_y_deg").get<double>(),
                          j.at("width").get<int>(), j.at("height").get<int>(), j.at("near").get<double>(),
                          j.at("far").get<double>());
        }
        CameraModel cam;
        cam.fx = j.at("fx").get<double>();
        cam.fy = j.at("fy").get<double>();
        cam.cx = j.at("cx").get<double>();
        cam.cy = j.at("cy").get<double>();
        cam.width = j.at("width").get<int>();
        cam.height = j.at("height").get<int>();
        const auto &rot = j.at("rotation");
        if (!rot.is_array() || rot.size() != 3)
            throw Error(ErrorCode::ParseError, "camera rotation must be a 3x3 array");
        for (int r = 0; r < 3; ++r) {
            const Vec3 row = vecFromJson(rot[static_cast<size_t>(r)]);
            for (int c = 0; c < 3; ++c)
                cam.rotation(r, c) = row[c];
        }
        cam.translation = vecFromJson(j.at("translation"));
        cam.nearDepth = j.at("near").get<double>();
        cam.farDepth = j.at("far").get<double>();
        cam.validate();
        return cam;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("camera JSON: ") + e.what());
    }
}

std::vector<CameraModel>
loadCameras(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path))
            throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    const nlohmann::json &list = j.is_object() && j.contains("cameras") ? j.at("cameras") : j;
    std::vector<CameraModel> cams;
    if (list.is_array()) {
        for (const auto &c : list)
            cams.push_back(cameraFromJson(c));
    } else {
        cams.push_back(cameraFromJson(list));
    }
    if (cams.empty())
        throw Error(ErrorCode::ParseError, path.string() + ": no cameras");
    return cams;
}

} // namespace voxup
