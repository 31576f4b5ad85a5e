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
#include "staticmap/backend.hpp"

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

DepthDiscretization::DepthDiscretization() : DepthDiscretization(Geometric(64, 50.0, 0.5)) {}

DepthDiscretization::DepthDiscretization(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw std::invalid_argument("DepthDiscretization: need at least one cell");
    if (edges_.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw std::invalid_argument("DepthDiscretization: too many cells");
    }
    if (edges_.front() != 0.0) throw std::invalid_argument("DepthDiscretization: first edge must be 0");
    double previous_width = 0.0;
    for (std::size_t d = 1; d < edges_.size(); ++d) {
        const double width = edges_[d] - edges_[d - 1];
        if (!(width > 0.0)) throw std::invalid_argument("DepthDiscretization: edges must increase");
        // Relative slack for edges produced by floating-point formulas.
        if (width < previous_width * (1.0 - 1e-9)) {
            throw std::invalid_argument("DepthDiscretization: cell widths must not shrink with depth");
        }
        previous_width = width;
    }
}

DepthDiscretization DepthDiscretization::Uniform(int num_cells, double max_depth) {
    if (num_cells < 1 || !(max_depth > 0.0)) {
        throw std::invalid_argument("DepthDiscretization: num_cells >= 1 and max_depth > 0 required");
    }
    std::vector<double> edges(static_cast<std::size_t>(num_cells) + 1);
    for (int d = 0; d <= num_cells; ++d) edges[d] = max_depth * d / num_cells;
    edges.back() = max_depth;
    return DepthDiscretization(std::move(edges));
}

DepthDiscretization DepthDiscretization::Geometric(int num_cells, double max_depth,
                                                   double first_width) {
    if (num_cells < 1 || !(max_depth > 0.0) || !(first_width > 0.0)) {
        throw std::invalid_argument("DepthDiscretization: positive num_cells, max_depth, first_width required");
    }
    const double uniform_width = max_depth / num_cells;
    if (std::abs(first_width - uniform_width) <= 1e-12 * max_depth) return Uniform(num_cells, max_depth);
    if (first_width > uniform_width) {
        throw std::invalid_argument("DepthDiscretization: first_width " + std::to_string(first_width) +
                                    " exceeds max_depth / num_cells, widths would shrink");
    }
    const double D = num_cells;
    // first edge as a function of the log-ratio; decreasing in log_g.
    const auto first_edge = [&](double log_g) {
        return max_depth * std::expm1(log_g) / std::expm1(D * log_g);
    };
    double lo = 0.0, hi = 1.0;
    while (first_edge(hi) > first_width) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0 || first_edge(mid) > first_width) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double log_g = 0.5 * (lo + hi);
    std::vector<double> edges(static_cast<std::size_t>(num_cells) + 1);
    edges[0] = 0.0;
    for (int d = 1; d < num_cells; ++d) {
        edges[d] = max_depth * std::expm1(d * log_g) / std::expm1(D * log_g);
    }
    edges.back() = max_depth;
    return DepthDiscretization(std::move(edges));
}

std::optional<int> DepthDiscretization::CellOf(double range) const {
    if (range > edges_.back() || std::isnan(range)) return std::nullopt;
    if (range <= edges_[1]) return 1;
    const auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), range);
    return static_cast<int>(it - edges_.begin());
}

void BackendConfig::validate() const {
    if (!(query_radius > 0.0)) throw std::invalid_argument("backend: query_radius must be > 0");
    if (!(lambda_thres_deg > 0.0) || lambda_thres_deg > 90.0) {
        throw std::invalid_argument("backend: lambda_thres must lie in (0, 90]");
    }
    if (!(occ_prob_threshold > 0.0 && occ_prob_threshold < 1.0)) {
        throw std::invalid_argument("backend: occ_prob_threshold must lie in (0, 1)");
    }
    if (min_check < 1) throw std::invalid_argument("backend: min_check must be >= 1");
    if (!(voxel_size > 0.0)) throw std::invalid_argument("backend: voxel_size must be > 0");
    if (normal_k < 3) throw std::invalid_argument("backend: normal_k must be >= 3");
    projection.validate();
}

BackendSubmap BackendSubmap::FromPoints(std::uint32_t id, const PoseSE3 &pose,
                                        std::span<const Point3> points, const BackendConfig &cfg) {
    BackendSubmap out;
    out.id = id;
    out.pose = pose;
    const auto kept = VoxelDownsample(points, cfg.voxel_size);
    out.points.reserve(kept.size());
    out.voxels.reserve(kept.size());
    for (const auto i : kept) {
        out.points.push_back(points[i]);
        out.voxels.push_back(VoxelIndexOf(points[i], cfg.voxel_size));
    }
    if (out.points.size() >= static_cast<std::size_t>(cfg.normal_k)) {
        out.normals = EstimateNormals(out.points, cfg.normal_k, pose.translation());
    } else {
        out.normals.normals.assign(out.points.size(), Eigen::Vector3d::Zero());
        out.normals.valid.assign(out.points.size(), 0);
    }
    return out;
}

BackendSubmap BackendSubmap::FromSubmap(const Submap &submap, const BackendConfig &cfg) {
    const PointCloud statics = submap.StaticPoints();
    return FromPoints(submap.id, submap.representative_pose, statics, cfg);
}

std::vector<SubmapRef> QueryNearbySubmaps(std::span<const SubmapRef> buffer, const PoseSE3 &query,
                                          double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("QueryNearbySubmaps: radius must be > 0");
    std::vector<std::pair<double, SubmapRef>> hits;
    for (const auto &s : buffer) {
        const double d = (s->pose.translation() - query.translation()).norm();
        if (d <= radius) hits.emplace_back(d, s);
    }
    std::sort(hits.begin(), hits.end(), [](const auto &a, const auto &b) {
        return a.first < b.first || (a.first == b.first && a.second->id < b.second->id);
    });
    std::vector<SubmapRef> out;
    out.reserve(hits.size());
    for (auto &h : hits) out.push_back(std::move(h.second));
    return out;
}

namespace {

BoundaryImage ComputeBoundary(const BackendSubmap &submap, const PoseSE3 &to_query,
                              const BackendConfig &cfg) {
    const int w = cfg.projection.width, h = cfg.projection.height;
    const std::size_t pixels = static_cast<std::size_t>(w) * h;
    std::vector<double> bound(pixels, std::numeric_limits<double>::infinity());
    std::vector<double> farthest(pixels, 0.0);
    const Eigen::Matrix3d &rotation = to_query.rotation();
    const double col_step = 2.0 * std::numbers::pi / w;
    const double row_step = cfg.projection.vertical_fov_deg() * std::numbers::pi / 180.0 / h;
    const int max_dc = std::max(1, w / 16), max_dr = std::max(1, h / 4);

    for (std::size_t i = 0; i < submap.points.size(); ++i) {
        const Point3 q = to_query * submap.points[i];
        const auto px = TryProjectPoint(q, cfg.projection);
        if (!px) continue;
        bool pseudo = false;
        if (cfg.incident_correction && submap.normals.is_valid(i)) {
            const auto angle = IncidentAngleDeg(q, rotation * submap.normals.normals[i]);
            pseudo = angle && *angle > cfg.lambda_thres_deg;
        }
        // A representative stands for its whole voxel: cover the pixels within
        // the voxel's inscribed angular radius.
        int dc = 0, dr = 0;
        if (cfg.splat_footprint) {
            const double half = 0.5 * cfg.voxel_size / px->range;
            dc = std::min(max_dc, static_cast<int>(half / col_step));
            dr = std::min(max_dr, static_cast<int>(half / row_step));
        }
        for (int r = std::max(0, px->row - dr); r <= std::min(h - 1, px->row + dr); ++r) {
            for (int k = -dc; k <= dc; ++k) {
                const int c = ((px->col + k) % w + w) % w;
                const std::size_t o = static_cast<std::size_t>(r) * w + c;
                farthest[o] = std::max(farthest[o], px->range);
                if (pseudo) bound[o] = std::min(bound[o], px->range);
            }
        }
    }

    // The closest pseudo-occupied point caps the boundary; common points behind
    // it are ignored and those in front of it never exceed it, so the capped
    // boundary is the pseudo-occupied range itself.
    BoundaryImage image(w, h);
    const auto last = static_cast<std::uint16_t>(cfg.depth.num_cells());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t o = static_cast<std::size_t>(r) * w + c;
            if (farthest[o] <= 0.0) continue;
            const double range = std::isfinite(bound[o]) ? bound[o] : farthest[o];
            const auto cell = cfg.depth.CellOf(range);
            image.set_cell(r, c, cell ? static_cast<std::uint16_t>(*cell) : last);
        }
    }
    return image;
}

}  // namespace

VisibilityBoundarySet VisibilityCheck(std::span<const SubmapRef> submaps, const PoseSE3 &query,
                                      const BackendConfig &cfg) {
    cfg.validate();
    VisibilityBoundarySet out(submaps.size());
    const PoseSE3 to_query = query.inverse();
    tbb::parallel_for(std::size_t{0}, submaps.size(), [&](std::size_t s) {
        out[s] = ComputeBoundary(*submaps[s], to_query, cfg);
    });
    return out;
}

OccupancyGrid AccumulateOccupancy(std::span<const SubmapRef> submaps,
                                  const VisibilityBoundarySet &boundaries, const PoseSE3 &query,
                                  const BackendConfig &cfg) {
    cfg.validate();
    if (cfg.visibility_check && boundaries.size() != submaps.size()) {
        throw std::invalid_argument("AccumulateOccupancy: one boundary image per submap required");
    }

    struct Slot {
        VoxelIndex voxel;
        std::uint32_t n_occ = 0;
        std::uint32_t covers_all = 0;     // submaps whose boundary reaches the voxel
        std::uint32_t covers_occ = 0;     // ... among those occupying it
        int row = -1, col = -1, cell = 0;  // row < 0: no visibility information
    };
    std::unordered_map<VoxelIndex, std::uint32_t, VoxelIndexHash> slot_of;
    std::vector<Slot> slots;
    std::vector<std::vector<std::uint32_t>> membership(submaps.size());
    std::size_t total = 0;
    for (const auto &s : submaps) total += s->voxels.size();
    slot_of.reserve(total);

    for (std::size_t s = 0; s < submaps.size(); ++s) {
        auto &mine = membership[s];
        mine.reserve(submaps[s]->voxels.size());
        for (const auto &v : submaps[s]->voxels) {
            const auto [it, inserted] = slot_of.try_emplace(v, static_cast<std::uint32_t>(slots.size()));
            if (inserted) slots.push_back(Slot{v});
            ++slots[it->second].n_occ;
            mine.push_back(it->second);
        }
    }

    if (cfg.visibility_check) {
        const PoseSE3 to_query = query.inverse();
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, slots.size(), 1024),
                          [&](const tbb::blocked_range<std::size_t> &range) {
                              for (std::size_t i = range.begin(); i != range.end(); ++i) {
                                  Slot &slot = slots[i];
                                  const Point3 center = to_query * VoxelCenter(slot.voxel, cfg.voxel_size);
                                  const auto px = TryProjectPoint(center, cfg.projection);
                                  if (!px) continue;
                                  const auto cell = cfg.depth.CellOf(px->range);
                                  if (!cell) continue;
                                  slot.row = px->row;
                                  slot.col = px->col;
                                  slot.cell = *cell;
                                  for (const auto &b : boundaries) {
                                      if (b.cell(slot.row, slot.col) > slot.cell) ++slot.covers_all;
                                  }
                              }
                          });
        for (std::size_t s = 0; s < submaps.size(); ++s) {
            for (const auto i : membership[s]) {
                Slot &slot = slots[i];
                if (slot.row >= 0 && boundaries[s].cell(slot.row, slot.col) > slot.cell) ++slot.covers_occ;
            }
        }
    }

    OccupancyGrid grid;
    grid.reserve(slots.size());
    const auto nearby = static_cast<std::uint32_t>(submaps.size());
    for (const auto &slot : slots) {
        VoxelEvidence e;
        e.n_occ = slot.n_occ;
        if (!cfg.visibility_check) {
            e.n_check = std::max(nearby, slot.n_occ);
        } else if (slot.row < 0) {
            e.n_check = slot.n_occ;
        } else {
            e.n_check = slot.n_occ + slot.covers_all - slot.covers_occ;
        }
        grid.emplace(slot.voxel, e);
    }
    return grid;
}

bool IsStaticVoxel(const VoxelEvidence &evidence, const BackendConfig &cfg) {
    if (evidence.n_check < cfg.min_check) return true;
    return evidence.probability() >= cfg.occ_prob_threshold;
}

VoxelSet ClassifyStatic(const OccupancyGrid &grid, const BackendConfig &cfg) {
    VoxelSet out;
    out.reserve(grid.size());
    for (const auto &[v, e] : grid) {
        if (IsStaticVoxel(e, cfg)) out.insert(v);
    }
    return out;
}

PointCloud ExtractStaticMap(std::span<const SubmapRef> submaps, const VoxelSet &static_voxels,
                            double voxel_size) {
    PointCloud out;
    for (const auto &s : submaps) {
        for (const auto &p : s->points) {
            if (static_voxels.contains(VoxelIndexOf(p, voxel_size))) out.push_back(p);
        }
    }
    return out;
}

PointCloud LocalMap::StaticCloud() const {
    std::vector<std::pair<VoxelIndex, const LocalVoxel *>> sorted;
    for (const auto &[v, lv] : voxels) {
        if (lv.is_static) sorted.emplace_back(v, &lv);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    PointCloud out;
    for (const auto &[v, lv] : sorted) {
        for (const auto &p : lv->points) out.push_back(p.position);
    }
    return out;
}

LocalMap RunBackendQuery(std::span<const SubmapRef> buffer, const BackendSubmap &query_submap,
                         const BackendConfig &cfg) {
    cfg.validate();
    LocalMap local;
    local.submap_id = query_submap.id;
    local.pose = query_submap.pose;
    local.voxel_size = cfg.voxel_size;

    const auto nearby = QueryNearbySubmaps(buffer, query_submap.pose, cfg.query_radius);
    if (nearby.empty()) return local;
    VisibilityBoundarySet boundaries;
    if (cfg.visibility_check) boundaries = VisibilityCheck(nearby, query_submap.pose, cfg);
    const OccupancyGrid grid = AccumulateOccupancy(nearby, boundaries, query_submap.pose, cfg);

    local.voxels.reserve(grid.size());
    for (const auto &[v, e] : grid) local.voxels.emplace(v, LocalVoxel{e, IsStaticVoxel(e, cfg), {}});

    std::vector<SubmapRef> by_id(nearby.begin(), nearby.end());
    std::sort(by_id.begin(), by_id.end(), [](const auto &a, const auto &b) { return a->id < b->id; });
    for (const auto &s : by_id) {
        for (std::size_t i = 0; i < s->points.size(); ++i) {
            local.voxels.at(s->voxels[i]).points.push_back({s->points[i], s->id});
        }
    }
    return local;
}

LocalMap AllStaticLocalMap(const BackendSubmap &submap, double voxel_size) {
    LocalMap local;
    local.submap_id = submap.id;
    local.pose = submap.pose;
    local.voxel_size = voxel_size;
    for (std::size_t i = 0; i < submap.points.size(); ++i) {
        auto &lv = local.voxels[VoxelIndexOf(submap.points[i], voxel_size)];
        lv.evidence.n_occ = 1;
        lv.evidence.n_check = 1;
        lv.is_static = true;
        lv.points.push_back({submap.points[i], submap.id});
    }
    return local;
}

}  // namespace staticmap
