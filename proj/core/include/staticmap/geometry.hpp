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
#include <span>
#include <vector>

#include "staticmap/types.hpp"

namespace staticmap {

struct Neighbor {
    std::uint32_t index;
    double squared_distance;
};

/// Static 3-d tree over a copy of the input points.
///
/// Queries are deterministic: equal distances are ordered by point index.
class KdTree {
public:
    explicit KdTree(std::span<const Point3> points);

    std::size_t size() const { return points_.size(); }
    const Point3 &point(std::uint32_t i) const { return points_[i]; }

    /// Up to `k` nearest points within `max_radius`, closest first.
    void Knn(const Point3 &query, std::size_t k, std::vector<Neighbor> &out,
             double max_radius = std::numeric_limits<double>::infinity()) const;
    std::vector<Neighbor> Knn(const Point3 &query, std::size_t k,
                              double max_radius = std::numeric_limits<double>::infinity()) const;

private:
    struct Node {
        double split = 0.0;
        std::int32_t axis = -1;  // -1 for leaves
        std::uint32_t left = 0, right = 0;
        std::uint32_t begin = 0, end = 0;
    };

    std::uint32_t Build(std::uint32_t begin, std::uint32_t end, int depth);
    void Search(std::uint32_t node, const Point3 &query, std::size_t k,
                std::vector<Neighbor> &heap, double &worst) const;

    std::vector<Point3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

/// Principal component analysis of a point set.
struct PlaneFit {
    Point3 centroid = Point3::Zero();
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // eigenvector of the smallest eigenvalue
    Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();  // ascending
    bool degenerate = true;
};

/// Degenerate when fewer than three points are given or when the two smallest
/// eigenvalues are equal within 1e-9 (lines, repeated points).
PlaneFit FitPlane(std::span<const Point3> points);
PlaneFit FitPlane(std::span<const Point3> points, std::span<const std::uint32_t> indices,
                  const Point3 *extra = nullptr);

/// Indices of the first point (in input order) falling in each occupied voxel.
std::vector<std::uint32_t> VoxelDownsample(std::span<const Point3> points, double voxel_size);

}  // namespace staticmap
