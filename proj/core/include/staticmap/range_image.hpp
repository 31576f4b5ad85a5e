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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "staticmap/types.hpp"

namespace staticmap {

/// Spherical projection covering 360 degrees of azimuth.
struct ProjectionConfig {
    int width = 1024;
    int height = 32;
    double fov_up_deg = 15.0;
    double fov_down_deg = -15.0;

    /// HDL-64 style layout used for KITTI sequences.
    static ProjectionConfig Kitti() { return {1024, 64, 3.0, -25.0}; }
    static ProjectionConfig Synthetic() { return {1024, 32, 15.0, -15.0}; }

    void validate() const;
    double vertical_fov_deg() const { return fov_up_deg - fov_down_deg; }
};

struct PixelCoord {
    int row = 0;
    int col = 0;
    double range = 0.0;
};

/// Returns std::nullopt when the elevation lies outside [fov_down, fov_up].
/// Throws std::invalid_argument for zero-norm or non-finite points.
std::optional<PixelCoord> ProjectPoint(const Point3 &p, const ProjectionConfig &cfg);

/// Projection that skips points instead of throwing (zero range, non-finite).
std::optional<PixelCoord> TryProjectPoint(const Point3 &p, const ProjectionConfig &cfg);

/// Unit direction through the center of pixel (row, col).
Eigen::Vector3d PixelDirection(int row, int col, const ProjectionConfig &cfg);

class RangeImage {
public:
    static constexpr std::int64_t kNoPoint = -1;

    RangeImage() = default;
    RangeImage(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    double range(int row, int col) const { return ranges_[Offset(row, col)]; }
    std::int64_t index(int row, int col) const { return indices_[Offset(row, col)]; }
    bool empty(int row, int col) const { return indices_[Offset(row, col)] == kNoPoint; }

    /// Keeps the smaller range; ties go to the lower index.
    void Offer(int row, int col, double range, std::int64_t index);

    std::size_t out_of_fov_count() const { return out_of_fov_; }
    std::size_t filled_pixels() const;

private:
    friend RangeImage BuildRangeImage(std::span<const Point3>, const ProjectionConfig &);
    std::size_t Offset(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> ranges_;
    std::vector<std::int64_t> indices_;
    std::size_t out_of_fov_ = 0;
};

/// Minimum-range image of `cloud` (already expressed in the viewer frame).
/// Points outside the field of view, and zero-range points, are skipped and counted.
RangeImage BuildRangeImage(std::span<const Point3> cloud, const ProjectionConfig &cfg);

struct NormalSet {
    std::vector<Eigen::Vector3d> normals;
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return normals.size(); }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

/// PCA normals over the k nearest neighbours (the point itself included),
/// flipped to face `viewer`. Neighbourhoods whose two smallest eigenvalues
/// coincide are flagged invalid. Throws std::invalid_argument when k < 3 or the
/// cloud holds fewer than k points.
NormalSet EstimateNormals(std::span<const Point3> cloud, int k,
                          const Point3 &viewer = Point3::Zero());

/// Angle in degrees between the viewing ray towards `p` and the surface normal,
/// folded into [0, 90]: 0 for a head-on hit, 90 for a grazing one. Returns
/// std::nullopt for zero-length rays or normals.
std::optional<double> IncidentAngleDeg(const Point3 &p, const Eigen::Vector3d &normal);

}  // namespace staticmap
