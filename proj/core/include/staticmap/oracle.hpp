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

#include <span>
#include <unordered_map>
#include <vector>

#include "staticmap/types.hpp"

namespace staticmap::synth {

/// Voxels pierced by the segment a -> b, in traversal order. The first entry
/// holds `a`, the last holds `b`; consecutive entries share a face.
std::vector<VoxelIndex> TraverseVoxels(const Point3 &a, const Point3 &b, double voxel_size);

struct OracleEvidence {
    std::uint32_t n_occ = 0;
    std::uint32_t n_free = 0;
    double probability() const {
        const auto total = n_occ + n_free;
        return total == 0 ? 0.0 : static_cast<double>(n_occ) / static_cast<double>(total);
    }
};

using OracleGrid = std::unordered_map<VoxelIndex, OracleEvidence, VoxelIndexHash>;

struct OracleOptions {
    bool static_points_only = true;  // trace only points the front-end kept
};

/// Exact ray-traced occupancy around `query`. Every point of every submap is
/// traced from the sensor origin of its source frame. Each submap casts one
/// vote per voxel: occupied when one of its rays ends there, free when its rays
/// only pass through. Only the part of each ray within `max_depth` of the query
/// position is walked.
OracleGrid DdaOccupancyOracle(std::span<const Submap> submaps, const PoseSE3 &query, double voxel_size,
                              double max_depth, const OracleOptions &options = {});

}  // namespace staticmap::synth
