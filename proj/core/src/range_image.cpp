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
#include "staticmap/range_image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "staticmap/geometry.hpp"

namespace staticmap {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::optional<PixelCoord> ProjectUnchecked(const Point3 &p, double range,
                                           const ProjectionConfig &cfg) {
    const double elevation = std::asin(std::clamp(p.z() / range, -1.0, 1.0)) * kRadToDeg;
    if (elevation > cfg.fov_up_deg || elevation < cfg.fov_down_deg) return std::nullopt;
    double azimuth = std::atan2(p.y(), p.x());
    if (azimuth < 0.0) azimuth += kTwoPi;

    PixelCoord px;
    px.range = range;
    px.col = std::min(static_cast<int>(std::floor(azimuth / kTwoPi * cfg.width)), cfg.width - 1);
    px.row = std::min(static_cast<int>(std::floor((cfg.fov_up_deg - elevation) /
                                                  cfg.vertical_fov_deg() * cfg.height)),
                      cfg.height - 1);
    px.row = std::max(px.row, 0);
    px.col = std::max(px.col, 0);
    return px;
}
}  // namespace

void ProjectionConfig::validate() const {
    if (width < 1 || height < 1) throw std::invalid_argument("ProjectionConfig: width/height must be >= 1");
    if (!(fov_up_deg > fov_down_deg)) throw std::invalid_argument("ProjectionConfig: fov_up must exceed fov_down");
    if (fov_up_deg > 90.0 || fov_down_deg < -90.0) {
        throw std::invalid_argument("ProjectionConfig: vertical field of view must lie in [-90, 90]");
    }
}

std::optional<PixelCoord> ProjectPoint(const Point3 &p, const ProjectionConfig &cfg) {
    if (!p.allFinite()) throw std::invalid_argument("ProjectPoint: non-finite point");
    const double range = p.norm();
    if (!(range > 0.0)) throw std::invalid_argument("ProjectPoint: zero-norm point");
    return ProjectUnchecked(p, range, cfg);
}

std::optional<PixelCoord> TryProjectPoint(const Point3 &p, const ProjectionConfig &cfg) {
    const double range = p.norm();
    if (!(range > 0.0) || !std::isfinite(range)) return std::nullopt;
    return ProjectUnchecked(p, range, cfg);
}

Eigen::Vector3d PixelDirection(int row, int col, const ProjectionConfig &cfg) {
    const double elevation =
        (cfg.fov_up_deg - (row + 0.5) * cfg.vertical_fov_deg() / cfg.height) * kDegToRad;
    const double azimuth = (col + 0.5) * kTwoPi / cfg.width;
    return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
            std::sin(elevation)};
}

RangeImage::RangeImage(int width, int height)
    : width_(width),
      height_(height),
      ranges_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
              std::numeric_limits<double>::infinity()),
      indices_(ranges_.size(), kNoPoint) {}

void RangeImage::Offer(int row, int col, double range, std::int64_t index) {
    const std::size_t o = Offset(row, col);
    if (range < ranges_[o] || (range == ranges_[o] && index < indices_[o])) {
        ranges_[o] = range;
        indices_[o] = index;
    }
}

std::size_t RangeImage::filled_pixels() const {
    return static_cast<std::size_t>(
        std::count_if(indices_.begin(), indices_.end(), [](auto i) { return i != kNoPoint; }));
}

RangeImage BuildRangeImage(std::span<const Point3> cloud, const ProjectionConfig &cfg) {
    cfg.validate();
    RangeImage image(cfg.width, cfg.height);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto px = TryProjectPoint(cloud[i], cfg);
        if (!px) {
            ++image.out_of_fov_;
            continue;
        }
        image.Offer(px->row, px->col, px->range, static_cast<std::int64_t>(i));
    }
    return image;
}

NormalSet EstimateNormals(std::span<const Point3> cloud, int k, const Point3 &viewer) {
    if (k < 3) throw std::invalid_argument("EstimateNormals: k must be >= 3");
    if (cloud.size() < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("EstimateNormals: cloud has fewer than k points");
    }
    NormalSet out;
    out.normals.assign(cloud.size(), Eigen::Vector3d::Zero());
    out.valid.assign(cloud.size(), 0);

    const KdTree tree(cloud);
    std::vector<Neighbor> neighbors;
    std::vector<std::uint32_t> indices;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        tree.Knn(cloud[i], static_cast<std::size_t>(k), neighbors);
        indices.clear();
        for (const auto &n : neighbors) indices.push_back(n.index);
        const PlaneFit fit = FitPlane(cloud, indices);
        if (fit.degenerate) continue;
        Eigen::Vector3d n = fit.normal;
        if (n.dot(viewer - cloud[i]) < 0.0) n = -n;
        out.normals[i] = n;
        out.valid[i] = 1;
    }
    return out;
}

std::optional<double> IncidentAngleDeg(const Point3 &p, const Eigen::Vector3d &normal) {
    const double range = p.norm();
    const double length = normal.norm();
    if (!(range > 0.0) || !(length > 0.0)) return std::nullopt;
    const double c = std::abs(p.dot(normal)) / (range * length);
    return std::acos(std::clamp(c, 0.0, 1.0)) * kRadToDeg;
}

}  // namespace staticmap
