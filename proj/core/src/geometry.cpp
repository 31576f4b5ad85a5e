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
#include "staticmap/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace staticmap {

namespace {
constexpr std::uint32_t kLeafSize = 12;

bool Closer(const Neighbor &a, const Neighbor &b) {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
}
}  // namespace

KdTree::KdTree(std::span<const Point3> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0U);
    nodes_.reserve(2 * points_.size() / kLeafSize + 1);
    if (!points_.empty()) Build(0, static_cast<std::uint32_t>(points_.size()), 0);
}

std::uint32_t KdTree::Build(std::uint32_t begin, std::uint32_t end, int depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= kLeafSize || depth > 48) return id;

    Eigen::Vector3d lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] - lo[axis] <= 0.0) return id;  // all points identical

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return points_[a][axis] < points_[b][axis] ||
                                (points_[a][axis] == points_[b][axis] && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const std::uint32_t left = Build(begin, mid, depth + 1);
    const std::uint32_t right = Build(mid, end, depth + 1);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree::Search(std::uint32_t node_id, const Point3 &query, std::size_t k,
                    std::vector<Neighbor> &heap, double &worst) const {
    const Node &node = nodes_[node_id];
    if (node.axis < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::uint32_t idx = order_[i];
            const Neighbor candidate{idx, (points_[idx] - query).squaredNorm()};
            if (candidate.squared_distance > worst) continue;
            if (heap.size() < k) {
                heap.push_back(candidate);
                std::push_heap(heap.begin(), heap.end(), Closer);
            } else if (Closer(candidate, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), Closer);
                heap.back() = candidate;
                std::push_heap(heap.begin(), heap.end(), Closer);
            } else {
                continue;
            }
            if (heap.size() == k) worst = std::min(worst, heap.front().squared_distance);
        }
        return;
    }
    const double diff = query[node.axis] - node.split;
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;
    Search(near, query, k, heap, worst);
    if (diff * diff <= worst) Search(far, query, k, heap, worst);
}

void KdTree::Knn(const Point3 &query, std::size_t k, std::vector<Neighbor> &out,
                 double max_radius) const {
    out.clear();
    if (k == 0 || points_.empty()) return;
    double worst = max_radius * max_radius;
    Search(0, query, k, out, worst);
    std::sort(out.begin(), out.end(), Closer);
}

std::vector<Neighbor> KdTree::Knn(const Point3 &query, std::size_t k, double max_radius) const {
    std::vector<Neighbor> out;
    out.reserve(k);
    Knn(query, k, out, max_radius);
    return out;
}

namespace {
PlaneFit FitFromMoments(const Point3 &sum, const Eigen::Matrix3d &outer, std::size_t n) {
    PlaneFit fit;
    if (n == 0) return fit;
    fit.centroid = sum / static_cast<double>(n);
    if (n < 3) return fit;
    const Eigen::Matrix3d covariance =
        outer / static_cast<double>(n) - fit.centroid * fit.centroid.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
    fit.eigenvalues = solver.eigenvalues();
    fit.normal = solver.eigenvectors().col(0).normalized();
    fit.degenerate = fit.eigenvalues[1] - fit.eigenvalues[0] <= 1e-9;
    return fit;
}
}  // namespace

// Moments are accumulated about the first point to limit cancellation for
// clouds far from the origin.
PlaneFit FitPlane(std::span<const Point3> points) {
    if (points.empty()) return {};
    const Point3 anchor = points.front();
    Point3 sum = Point3::Zero();
    Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
    for (const auto &p : points) {
        const Point3 d = p - anchor;
        sum += d;
        outer += d * d.transpose();
    }
    PlaneFit fit = FitFromMoments(sum, outer, points.size());
    fit.centroid += anchor;
    return fit;
}

PlaneFit FitPlane(std::span<const Point3> points, std::span<const std::uint32_t> indices,
                  const Point3 *extra) {
    const std::size_t n = indices.size() + (extra ? 1 : 0);
    if (n == 0) return {};
    const Point3 anchor = indices.empty() ? *extra : points[indices.front()];
    Point3 sum = Point3::Zero();
    Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
    for (const auto i : indices) {
        const Point3 d = points[i] - anchor;
        sum += d;
        outer += d * d.transpose();
    }
    if (extra) {
        const Point3 d = *extra - anchor;
        sum += d;
        outer += d * d.transpose();
    }
    PlaneFit fit = FitFromMoments(sum, outer, n);
    fit.centroid += anchor;
    return fit;
}

std::vector<std::uint32_t> VoxelDownsample(std::span<const Point3> points, double voxel_size) {
    std::unordered_map<VoxelIndex, std::uint32_t, VoxelIndexHash> first;
    first.reserve(points.size() / 4 + 16);
    std::vector<std::uint32_t> kept;
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        if (first.try_emplace(VoxelIndexOf(points[i], voxel_size), i).second) kept.push_back(i);
    }
    return kept;
}

}  // namespace staticmap
