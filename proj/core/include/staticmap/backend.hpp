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
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "staticmap/range_image.hpp"
#include "staticmap/types.hpp"

namespace staticmap {

/// Range bins along each pixel's line of sight, widths non-decreasing with depth.
///
/// Cell d (1-based) covers (e[d-1], e[d]]; e[0] = 0 and e[D] = max_depth.
/// Cell 0 is reserved for "nothing trusted".
class DepthDiscretization {
public:
    DepthDiscretization();
    explicit DepthDiscretization(std::vector<double> edges);

    /// e[d] = max_depth * (g^d - 1) / (g^D - 1) with g chosen so that e[1] = first_width.
    static DepthDiscretization Geometric(int num_cells, double max_depth, double first_width);
    static DepthDiscretization Uniform(int num_cells, double max_depth);

    int num_cells() const { return static_cast<int>(edges_.size()) - 1; }
    double max_depth() const { return edges_.back(); }
    double first_width() const { return edges_[1]; }
    const std::vector<double> &edges() const { return edges_; }

    /// Cell holding `range`; ranges <= e[1] fall in cell 1, ranges beyond
    /// max_depth have no cell.
    std::optional<int> CellOf(double range) const;

private:
    std::vector<double> edges_;
};

struct BackendConfig {
    double query_radius = 20.0;      // meters
    double lambda_thres_deg = 75.0;  // incident angle above which a point is pseudo-occupied
    ProjectionConfig projection = ProjectionConfig::Synthetic();
    DepthDiscretization depth;
    double occ_prob_threshold = 0.5;
    std::uint32_t min_check = 2;
    double voxel_size = 0.2;
    int normal_k = 10;
    // Clamp each pixel's boundary to its closest pseudo-occupied point.
    bool incident_correction = true;
    // When false every voxel is checked by every nearby submap.
    bool visibility_check = true;
    // Spread each representative point over the pixels its voxel subtends.
    bool splat_footprint = true;

    void validate() const;
};

/// A static submap as seen by the back-end: one representative point per
/// occupied voxel (the first static point in it) and world-frame normals.
///
/// Normals are estimated once in the world frame; PCA normals are rotation
/// equivariant, so they are only rotated into each query frame.
struct BackendSubmap {
    std::uint32_t id = 0;
    PoseSE3 pose;
    PointCloud points;
    std::vector<VoxelIndex> voxels;
    NormalSet normals;

    static BackendSubmap FromSubmap(const Submap &submap, const BackendConfig &cfg);
    static BackendSubmap FromPoints(std::uint32_t id, const PoseSE3 &pose,
                                    std::span<const Point3> points, const BackendConfig &cfg);
};

using SubmapRef = std::shared_ptr<const BackendSubmap>;

/// Submaps whose representative translation lies within `radius` of the query,
/// closest first, ties by id. Throws std::invalid_argument for radius <= 0.
std::vector<SubmapRef> QueryNearbySubmaps(std::span<const SubmapRef> buffer, const PoseSE3 &query,
                                          double radius);

/// Per-pixel maximum trusted depth cell of one submap.
class BoundaryImage {
public:
    BoundaryImage() = default;
    BoundaryImage(int width, int height)
        : width_(width), height_(height), cells_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint16_t cell(int row, int col) const { return cells_[Offset(row, col)]; }
    void set_cell(int row, int col, std::uint16_t c) { cells_[Offset(row, col)] = c; }
    friend bool operator==(const BoundaryImage &, const BoundaryImage &) = default;

private:
    std::size_t Offset(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint16_t> cells_;
};

using VisibilityBoundarySet = std::vector<BoundaryImage>;

/// One boundary image per submap, seen from `query`.
///
/// Per pixel, the closest point whose incident angle exceeds lambda_thres
/// bounds the trusted depth; without such a point the farthest return does.
/// Ranges beyond max_depth saturate at the last cell.
VisibilityBoundarySet VisibilityCheck(std::span<const SubmapRef> submaps, const PoseSE3 &query,
                                      const BackendConfig &cfg);

struct VoxelEvidence {
    std::uint32_t n_occ = 0;
    std::uint32_t n_check = 0;

    double probability() const {
        return n_check == 0 ? 0.0 : static_cast<double>(n_occ) / static_cast<double>(n_check);
    }
    friend bool operator==(const VoxelEvidence &, const VoxelEvidence &) = default;
};

using OccupancyGrid = std::unordered_map<VoxelIndex, VoxelEvidence, VoxelIndexHash>;

/// Counts, per voxel touched by any submap, the submaps occupying it (n_occ) and
/// the submaps occupying it or whose boundary at the voxel center's pixel
/// reaches the voxel's depth cell (n_check). Voxels whose center is out of the
/// field of view or beyond max_depth get n_check = n_occ.
OccupancyGrid AccumulateOccupancy(std::span<const SubmapRef> submaps,
                                  const VisibilityBoundarySet &boundaries, const PoseSE3 &query,
                                  const BackendConfig &cfg);

/// Static when n_check < min_check, or when n_occ / n_check >= occ_prob_threshold.
bool IsStaticVoxel(const VoxelEvidence &evidence, const BackendConfig &cfg);
VoxelSet ClassifyStatic(const OccupancyGrid &grid, const BackendConfig &cfg);

/// Representative points of all submaps that fall in `static_voxels`.
PointCloud ExtractStaticMap(std::span<const SubmapRef> submaps, const VoxelSet &static_voxels,
                            double voxel_size);

struct TaggedPoint {
    Point3 position;
    std::uint32_t submap_id = 0;
    friend bool operator==(const TaggedPoint &, const TaggedPoint &) = default;
};

struct LocalVoxel {
    VoxelEvidence evidence;
    bool is_static = true;
    std::vector<TaggedPoint> points;  // sorted by submap id
};

/// Verdicts for every voxel a back-end query evaluated.
struct LocalMap {
    std::uint32_t submap_id = 0;
    PoseSE3 pose;
    double voxel_size = 0.2;
    std::unordered_map<VoxelIndex, LocalVoxel, VoxelIndexHash> voxels;

    PointCloud StaticCloud() const;
};

/// Full back-end query: nearby submaps, visibility check, accumulation and
/// classification at the pose of `query_submap`.
LocalMap RunBackendQuery(std::span<const SubmapRef> buffer, const BackendSubmap &query_submap,
                         const BackendConfig &cfg);

/// A local map marking every voxel of one submap static (front-end only runs).
LocalMap AllStaticLocalMap(const BackendSubmap &submap, double voxel_size);

}  // namespace staticmap
