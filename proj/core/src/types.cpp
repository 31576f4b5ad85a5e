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
#include "staticmap/types.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace staticmap {

bool IsValidRotation(const Eigen::Matrix3d &rotation, double tolerance) {
    if (!rotation.allFinite()) return false;
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tolerance) return false;
    return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

PoseSE3::PoseSE3() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

PoseSE3::PoseSE3(const Eigen::Matrix3d &rotation, const Eigen::Vector3d &translation)
    : rotation_(rotation), translation_(translation) {
    if (!IsValidRotation(rotation_)) {
        throw std::invalid_argument("PoseSE3: rotation is not orthonormal with det +1");
    }
    if (!translation_.allFinite()) {
        throw std::invalid_argument("PoseSE3: translation is not finite");
    }
}

PoseSE3 PoseSE3::FromTranslation(const Eigen::Vector3d &translation) {
    return {Eigen::Matrix3d::Identity(), translation};
}

PoseSE3 PoseSE3::FromYaw(double yaw, const Eigen::Vector3d &translation) {
    return {Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix(), translation};
}

PoseSE3 PoseSE3::FromApproximate(const Eigen::Matrix3d &rotation,
                                 const Eigen::Vector3d &translation) {
    if (!rotation.allFinite()) {
        throw std::invalid_argument("PoseSE3: rotation is not finite");
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d projected = svd.matrixU() * svd.matrixV().transpose();
    if (projected.determinant() < 0.0) {
        Eigen::Matrix3d u = svd.matrixU();
        u.col(2) = -u.col(2);
        projected = u * svd.matrixV().transpose();
    }
    if ((projected - rotation).cwiseAbs().maxCoeff() > kApproximateRotationTol) {
        throw std::invalid_argument("PoseSE3: matrix is not close to a rotation");
    }
    return {projected, translation};
}

PoseSE3 PoseSE3::operator*(const PoseSE3 &other) const {
    PoseSE3 out;
    out.rotation_ = rotation_ * other.rotation_;
    out.translation_ = rotation_ * other.translation_ + translation_;
    return out;
}

PoseSE3 PoseSE3::inverse() const {
    PoseSE3 out;
    out.rotation_ = rotation_.transpose();
    out.translation_ = -(out.rotation_ * translation_);
    return out;
}

Eigen::Matrix4d PoseSE3::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
}

void Frame::validate() const {
    if (gt_labels && gt_labels->size() != cloud.size()) {
        throw std::invalid_argument("Frame " + std::to_string(timestamp_index) + ": " +
                                    std::to_string(gt_labels->size()) + " labels for " +
                                    std::to_string(cloud.size()) + " points");
    }
}

std::size_t Submap::CountState(PointState state) const {
    std::size_t n = 0;
    for (const auto &p : points) n += p.state == state ? 1 : 0;
    return n;
}

PointCloud Submap::StaticPoints() const {
    PointCloud out;
    out.reserve(points.size());
    for (const auto &p : points) {
        if (IsStaticState(p.state)) out.push_back(p.position);
    }
    return out;
}

PoseSE3 RepresentativePose(std::span<const PoseSE3> poses) {
    if (poses.empty()) throw std::invalid_argument("RepresentativePose: no poses");
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto &pose : poses) mean += pose.translation();
    mean /= static_cast<double>(poses.size());
    return {poses[poses.size() / 2].rotation(), mean};
}

VoxelIndex VoxelIndexOf(const Point3 &p, double voxel_size) {
    if (!(voxel_size > 0.0)) throw std::invalid_argument("VoxelIndexOf: voxel_size must be > 0");
    if (!p.allFinite()) {
        throw std::invalid_argument("VoxelIndexOf: non-finite point (" + std::to_string(p.x()) +
                                    ", " + std::to_string(p.y()) + ", " + std::to_string(p.z()) +
                                    ")");
    }
    return {static_cast<std::int32_t>(std::floor(p.x() / voxel_size)),
            static_cast<std::int32_t>(std::floor(p.y() / voxel_size)),
            static_cast<std::int32_t>(std::floor(p.z() / voxel_size))};
}

Point3 VoxelCenter(const VoxelIndex &v, double voxel_size) {
    return {(v.ix + 0.5) * voxel_size, (v.iy + 0.5) * voxel_size, (v.iz + 0.5) * voxel_size};
}

PointCloud TransformCloud(std::span<const Point3> cloud, const PoseSE3 &pose) {
    PointCloud out;
    out.reserve(cloud.size());
    for (const auto &p : cloud) out.push_back(pose * p);
    return out;
}

}  // namespace staticmap
