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

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

namespace staticmap {

using Point3 = Eigen::Vector3d;
using PointCloud = std::vector<Point3>;

/// Rigid transform mapping points from a local frame into a parent frame.
///
/// The rotation is validated on construction: it must be orthonormal with
/// determinant +1 within 1e-9. Use `FromApproximate` when reading matrices that
/// were printed with limited precision.
class PoseSE3 {
public:
    static constexpr double kApproximateRotationTol = 1e-3;

    PoseSE3();
    PoseSE3(const Eigen::Matrix3d &rotation, const Eigen::Vector3d &translation);

    static PoseSE3 Identity() { return {}; }
    static PoseSE3 FromTranslation(const Eigen::Vector3d &translation);
    /// Rotation about +z by `yaw` radians, followed by `translation`.
    static PoseSE3 FromYaw(double yaw, const Eigen::Vector3d &translation = Eigen::Vector3d::Zero());
    /// Projects `rotation` onto SO(3). Throws if any entry moves by more than
    /// `kApproximateRotationTol`, so skewed or reflected input is rejected.
    static PoseSE3 FromApproximate(const Eigen::Matrix3d &rotation,
                                   const Eigen::Vector3d &translation);

    const Eigen::Matrix3d &rotation() const { return rotation_; }
    const Eigen::Vector3d &translation() const { return translation_; }

    Point3 operator*(const Point3 &p) const { return rotation_ * p + translation_; }
    PoseSE3 operator*(const PoseSE3 &other) const;
    PoseSE3 inverse() const;

    Eigen::Matrix4d matrix() const;

private:
    Eigen::Matrix3d rotation_;
    Eigen::Vector3d translation_;
};

bool IsValidRotation(const Eigen::Matrix3d &rotation, double tolerance = 1e-9);

enum class Label : std::uint8_t { Static = 0, Dynamic = 1, Unknown = 255 };

/// One LiDAR scan in its sensor frame together with its sensor-to-world pose.
struct Frame {
    PointCloud cloud;
    PoseSE3 pose;
    std::size_t timestamp_index = 0;
    std::optional<std::vector<Label>> gt_labels;

    /// Throws std::invalid_argument when gt_labels and cloud sizes differ.
    void validate() const;
};

enum class PointState : std::uint8_t { RawStatic, Dynamic, Reverted };

inline bool IsStaticState(PointState state) { return state != PointState::Dynamic; }

struct SubmapPoint {
    Point3 position;  // world frame
    PointState state = PointState::RawStatic;
    std::uint32_t source_frame = 0;  // timestamp_index of the originating frame
    std::uint32_t source_point = 0;  // index inside that frame's cloud
};

struct SubmapMember {
    std::size_t timestamp_index = 0;
    PoseSE3 pose;
};

/// n consecutive frames fused in the world frame.
struct Submap {
    std::uint32_t id = 0;
    PoseSE3 representative_pose;
    std::vector<SubmapPoint> points;
    std::vector<SubmapMember> members;

    std::size_t CountState(PointState state) const;
    PointCloud StaticPoints() const;
};

/// Representative pose of a window: rotation of the middle frame, mean translation.
PoseSE3 RepresentativePose(std::span<const PoseSE3> poses);

struct VoxelIndex {
    std::int32_t ix = 0;
    std::int32_t iy = 0;
    std::int32_t iz = 0;

    friend bool operator==(const VoxelIndex &, const VoxelIndex &) = default;
    friend auto operator<=>(const VoxelIndex &, const VoxelIndex &) = default;
};

struct VoxelIndexHash {
    std::size_t operator()(const VoxelIndex &v) const noexcept {
        const auto x = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.ix));
        const auto y = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.iy));
        const auto z = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.iz));
        std::uint64_t h = (x * 73856093ULL) ^ (y * 19349669ULL) ^ (z * 83492791ULL);
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }
};

using VoxelSet = std::unordered_set<VoxelIndex, VoxelIndexHash>;

/// Per-axis floor(p / voxel_size). Throws std::invalid_argument for
/// non-finite points or a non-positive voxel size.
VoxelIndex VoxelIndexOf(const Point3 &p, double voxel_size);
Point3 VoxelCenter(const VoxelIndex &v, double voxel_size);

PointCloud TransformCloud(std::span<const Point3> cloud, const PoseSE3 &pose);

}  // namespace staticmap
