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
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "staticmap/backend.hpp"
#include "staticmap/types.hpp"

namespace staticmap {

struct GlobalVoxel {
    bool occupied = false;
    std::uint32_t owner = 0;
    double owner_distance = 0.0;
    std::vector<TaggedPoint> points;  // one per contributing submap, sorted by submap id

    friend bool operator==(const GlobalVoxel &, const GlobalVoxel &) = default;
};

/// Global static map fused from local back-end results.
///
/// Each voxel is owned by the local map whose pose is nearest to the voxel
/// center (ties to the lower submap id) and is occupied exactly when its owner
/// judged it static. Merging is order independent.
class GlobalMap {
public:
    explicit GlobalMap(double voxel_size = 0.2) : voxel_size_(voxel_size) {}

    void Merge(const LocalMap &local);

    double voxel_size() const { return voxel_size_; }
    std::size_t size() const { return voxels_.size(); }
    std::size_t occupied_count() const;
    const std::unordered_map<VoxelIndex, GlobalVoxel, VoxelIndexHash> &voxels() const { return voxels_; }
    const GlobalVoxel *find(const VoxelIndex &v) const;

    /// Points of occupied voxels, ordered by voxel index then submap id.
    PointCloud StaticCloud() const;

    /// One local map per owner holding exactly the voxels it owns.
    std::vector<LocalMap> Decompose() const;

    friend bool operator==(const GlobalMap &a, const GlobalMap &b) {
        return a.voxel_size_ == b.voxel_size_ && a.voxels_ == b.voxels_;
    }

private:
    double voxel_size_;
    std::unordered_map<VoxelIndex, GlobalVoxel, VoxelIndexHash> voxels_;
    std::map<std::uint32_t, PoseSE3> owner_poses_;
};

/// Throws std::invalid_argument for an empty input or mismatched voxel sizes.
GlobalMap MergeSubmaps(std::span<const LocalMap> results, double voxel_size);

}  // namespace staticmap
