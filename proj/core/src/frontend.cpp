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
#include "staticmap/frontend.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "staticmap/geometry.hpp"

namespace staticmap {

void FrontendConfig::validate() const {
    if (window_n < 2) throw std::invalid_argument("frontend: window_n must be >= 2");
    if (!(range_diff_threshold > 0.0)) throw std::invalid_argument("frontend: range_diff_threshold must be > 0");
    if (revert_k < 3) throw std::invalid_argument("frontend: revert_k must be >= 3");
    if (!(revert_dist_eps > 0.0)) throw std::invalid_argument("frontend: revert_dist_eps must be > 0");
    if (!(revert_search_radius > 0.0)) throw std::invalid_argument("frontend: revert_search_radius must be > 0");
    if (scan_row_window < 0) throw std::invalid_argument("frontend: scan_row_window must be >= 0");
    if (!(revert_angle_eps_deg > 0.0)) throw std::invalid_argument("frontend: revert_angle_eps must be > 0");
    projection.validate();
}

Submap AssembleSubmap(std::span<const Frame> frames, const FrontendConfig &cfg, std::uint32_t id) {
    if (frames.empty()) throw std::invalid_argument("AssembleSubmap: empty window");
    if (frames.size() != cfg.window_n) {
        throw std::invalid_argument("AssembleSubmap: expected " + std::to_string(cfg.window_n) +
                                    " frames, got " + std::to_string(frames.size()));
    }
    Submap submap;
    submap.id = id;
    std::vector<PoseSE3> poses;
    std::size_t total = 0;
    for (const auto &f : frames) {
        total += f.cloud.size();
        poses.push_back(f.pose);
        submap.members.push_back({f.timestamp_index, f.pose});
    }
    submap.representative_pose = RepresentativePose(poses);
    submap.points.reserve(total);
    for (const auto &f : frames) {
        for (std::size_t i = 0; i < f.cloud.size(); ++i) {
            submap.points.push_back({f.pose * f.cloud[i], PointState::RawStatic,
                                     static_cast<std::uint32_t>(f.timestamp_index),
                                     static_cast<std::uint32_t>(i)});
        }
    }
    return submap;
}

namespace {
// Closest scan return among the pixels up to `rows` above and below each
// pixel in the same column; empty pixels are not consulted.
std::vector<double> NearestInColumn(const RangeImage &scan, int rows) {
    const int w = scan.width(), h = scan.height();
    std::vector<double> out(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double best = scan.range(r, c);
            for (int rr = std::max(0, r - rows); rr <= std::min(h - 1, r + rows); ++rr) {
                best = std::min(best, scan.range(rr, c));
            }
            out[static_cast<std::size_t>(r) * w + c] = best;
        }
    }
    return out;
}
}  // namespace

Submap VisibilityRemoval(Submap submap, std::span<const Frame> frames, const FrontendConfig &cfg) {
    cfg.validate();
    const std::size_t n = submap.points.size();
    std::vector<std::vector<std::uint8_t>> flags(frames.size());

    tbb::parallel_for(std::size_t{0}, frames.size(), [&](std::size_t f) {
        const Frame &frame = frames[f];
        const RangeImage scan = BuildRangeImage(frame.cloud, cfg.projection);
        const std::vector<double> nearest = NearestInColumn(scan, cfg.scan_row_window);
        const PoseSE3 world_to_sensor = frame.pose.inverse();
        const auto width = static_cast<std::size_t>(scan.width());
        auto &mine = flags[f];
        mine.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto px = TryProjectPoint(world_to_sensor * submap.points[i].position, cfg.projection);
            if (!px || scan.empty(px->row, px->col)) continue;
            const double seen = nearest[static_cast<std::size_t>(px->row) * width + px->col];
            if (px->range < seen - cfg.range_diff_threshold) mine[i] = 1;
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        for (const auto &mine : flags) {
            if (mine[i]) {
                submap.points[i].state = PointState::Dynamic;
                break;
            }
        }
    }
    return submap;
}

namespace {
RevertDecision Compare(const PlaneFit &before, const PlaneFit &after, const Point3 &candidate) {
    RevertDecision decision;
    if (before.degenerate || after.degenerate) return decision;
    decision.eligible = true;
    decision.plane_distance = std::abs(before.normal.dot(candidate - before.centroid));
    const double c = std::min(1.0, std::abs(before.normal.dot(after.normal)));
    decision.normal_angle_deg = std::acos(c) * 180.0 / std::numbers::pi;
    return decision;
}

bool Accept(const RevertDecision &d, const FrontendConfig &cfg) {
    if (!d.eligible) return false;
    if (cfg.revert_use_distance && d.plane_distance > cfg.revert_dist_eps) return false;
    if (cfg.revert_use_angle && d.normal_angle_deg > cfg.revert_angle_eps_deg) return false;
    return true;
}
}  // namespace

RevertDecision EvaluateRevert(std::span<const Point3> neighbourhood, const Point3 &candidate) {
    std::vector<std::uint32_t> all(neighbourhood.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    return Compare(FitPlane(neighbourhood), FitPlane(neighbourhood, all, &candidate), candidate);
}

Submap MapBasedRevert(Submap submap, const FrontendConfig &cfg) {
    cfg.validate();
    PointCloud statics;
    std::vector<std::uint32_t> dynamics;
    for (std::uint32_t i = 0; i < submap.points.size(); ++i) {
        if (submap.points[i].state == PointState::RawStatic) {
            statics.push_back(submap.points[i].position);
        } else if (submap.points[i].state == PointState::Dynamic) {
            dynamics.push_back(i);
        }
    }
    const auto k = static_cast<std::size_t>(cfg.revert_k);
    if (statics.size() < k || dynamics.empty()) return submap;

    const KdTree tree(statics);
    tbb::parallel_for(
        tbb::blocked_range<std::size_t>(0, dynamics.size(), 256),
        [&](const tbb::blocked_range<std::size_t> &range) {
            std::vector<Neighbor> neighbors;
            std::vector<std::uint32_t> indices;
            for (std::size_t d = range.begin(); d != range.end(); ++d) {
                SubmapPoint &point = submap.points[dynamics[d]];
                tree.Knn(point.position, k, neighbors, cfg.revert_search_radius);
                if (neighbors.size() < k) continue;
                indices.clear();
                for (const auto &nb : neighbors) indices.push_back(nb.index);
                const RevertDecision decision =
                    Compare(FitPlane(statics, indices), FitPlane(statics, indices, &point.position),
                            point.position);
                const bool revert = Accept(decision, cfg);
                if (revert) point.state = PointState::Reverted;
            }
        });
    return submap;
}

Submap RunFrontend(std::span<const Frame> frames, const FrontendConfig &cfg, std::uint32_t id) {
    Submap submap = VisibilityRemoval(AssembleSubmap(frames, cfg, id), frames, cfg);
    if (cfg.revert_enabled) submap = MapBasedRevert(std::move(submap), cfg);
    return submap;
}

}  // namespace staticmap
