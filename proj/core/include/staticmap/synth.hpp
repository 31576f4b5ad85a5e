// MIT License

// Copyright (c) 2026 The staticmap authors.

// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
// copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:

// The above copyright notice and this permission notice shall be included in all
// copies or substantial portions of the Software.

// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "staticmap/range_image.hpp"
#include "staticmap/types.hpp"

namespace staticmap::synth {

struct Box {
    Eigen::Vector3d min;
    Eigen::Vector3d max;
};

struct VerticalCylinder {
    Eigen::Vector2d center;
    double radius = 0.3;
    double z_min = 0.0;
    double z_max = 2.0;
};

/// Pedestrian proxy: a vertical cylinder walking a piecewise-linear path.
struct Agent {
    double radius = 0.3;
    double height = 1.7;
    double z_base = 0.0;
    double speed = 1.3;  // m/s
    double phase = 0.0;  // meters along the path at t = 0
    bool loop = true;    // closed path; otherwise the agent stops at the last waypoint
    std::vector<Eigen::Vector2d> waypoints;

    VerticalCylinder ShapeAt(double t) const;
};

struct SensorTrajectory {
    std::vector<Eigen::Vector3d> waypoints;
    double speed = 2.0;  // m/s
    double scan_rate_hz = 10.0;
};

struct SceneSpec {
    std::uint64_t seed = 1;
    std::size_t num_frames = 100;
    ProjectionConfig projection = ProjectionConfig::Synthetic();
    double max_range = 50.0;
    double range_noise_sigma = 0.0;
    std::optional<double> ground_z;
    std::vector<Box> boxes;
    std::vector<VerticalCylinder> cylinders;
    std::vector<Agent> agents;
    SensorTrajectory sensor;

    /// Throws std::invalid_argument on negative speeds, empty paths and the like.
    void validate() const;
    PoseSE3 SensorPose(std::size_t frame) const;
    double FrameTime(std::size_t frame) const { return static_cast<double>(frame) / sensor.scan_rate_hz; }
};

/// Position and heading (radians) at arc length `s` along a polyline.
std::pair<Eigen::Vector3d, double> PathPoint(const std::vector<Eigen::Vector3d> &waypoints, bool loop,
                                             double s);

struct RayHit {
    double range = 0.0;
    bool dynamic = false;
};

/// Nearest intersection of a world-frame ray with the scene at time t.
std::optional<RayHit> CastRay(const SceneSpec &spec, const Eigen::Vector3d &origin,
                              const Eigen::Vector3d &direction, double t);

/// One frame per scan time; every pixel-center ray that hits something within
/// max_range yields a labeled point in the sensor frame. Bit-reproducible
/// for a given spec.
std::vector<Frame> GenerateSequence(const SceneSpec &spec);
Frame GenerateFrame(const SceneSpec &spec, std::size_t index);

/// Flat `key = value` header followed by [box], [cylinder] and [agent] blocks.
SceneSpec ParseScene(const std::string &text);
SceneSpec LoadScene(const std::filesystem::path &path);
std::string SerializeScene(const SceneSpec &spec);

// Preset scenes. Ground sits 2 mm below z = 0 so that ground returns fall in
// the voxel layer below agents standing at z = 0.
SceneSpec CrowdCorridor(std::uint64_t seed, std::size_t num_agents = 10, std::size_t num_frames = 200);
SceneSpec StaticCorridor(std::uint64_t seed, std::size_t num_frames = 60);
SceneSpec OpenSquare(std::uint64_t seed, std::size_t num_agents = 6, std::size_t num_frames = 60);
SceneSpec FlatGround(std::uint64_t seed, std::size_t num_agents = 6, std::size_t num_frames = 60);
/// Preset by name: crowd, corridor, square, flat.
SceneSpec PresetScene(const std::string &name, std::uint64_t seed);

}  // namespace staticmap::synth
