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
#include "staticmap/oracle.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

namespace staticmap::synth {

std::vector<VoxelIndex> TraverseVoxels(const Point3 &a, const Point3 &b, double voxel_size) {
    VoxelIndex cur = VoxelIndexOf(a, voxel_size);
    const VoxelIndex end = VoxelIndexOf(b, voxel_size);
    std::vector<VoxelIndex> out{cur};
    if (cur == end) return out;

    const Eigen::Vector3d d = b - a;
    std::array<std::int32_t *, 3> idx{&cur.ix, &cur.iy, &cur.iz};
    const std::array<std::int32_t, 3> target{end.ix, end.iy, end.iz};
    std::array<int, 3> step{};
    std::array<double, 3> t_max{}, t_delta{};
    std::array<std::int64_t, 3> remaining{};
    std::int64_t total = 0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        remaining[k] = std::llabs(static_cast<std::int64_t>(target[k]) - *idx[k]);
        total += remaining[k];
        if (d[k] > 0.0) {
            step[k] = 1;
            t_max[k] = ((*idx[k] + 1) * voxel_size - a[k]) / d[k];
            t_delta[k] = voxel_size / d[k];
        } else if (d[k] < 0.0) {
            step[k] = -1;
            t_max[k] = (*idx[k] * voxel_size - a[k]) / d[k];
            t_delta[k] = -voxel_size / d[k];
        } else {
            t_max[k] = t_delta[k] = inf;
        }
    }
    out.reserve(static_cast<std::size_t>(total) + 1);
    // Only axes with steps left may advance, so rounding near voxel corners
    // cannot overshoot the endpoint voxel.
    for (std::int64_t n = 0; n < total; ++n) {
        int axis = -1;
        for (int k = 0; k < 3; ++k) {
            if (remaining[k] > 0 && (axis < 0 || t_max[k] < t_max[axis])) axis = k;
        }
        *idx[axis] += step[axis];
        t_max[axis] += t_delta[axis];
        --remaining[axis];
        out.push_back(cur);
    }
    return out;
}

namespace {

struct Stamped {
    OracleEvidence evidence;
    std::int64_t last_occ = -1;
    std::int64_t last_free = -1;
};

// One vote per submap and voxel: occupied when any of the submap's rays ends
// in it, otherwise free when any of them passes through.
void Vote(Stamped &c, std::int64_t stamp, bool occupied) {
    if (occupied) {
        if (c.last_occ == stamp) return;
        if (c.last_free == stamp) --c.evidence.n_free;
        c.last_occ = stamp;
        ++c.evidence.n_occ;
    } else if (c.last_occ != stamp && c.last_free != stamp) {
        c.last_free = stamp;
        ++c.evidence.n_free;
    }
}

// Parameter interval of a + t (b - a), t in [0, 1], inside the ball.
bool ClipToBall(const Point3 &a, const Point3 &b, const Point3 &center, double radius, double &t0,
                double &t1) {
    const Eigen::Vector3d d = b - a;
    const Eigen::Vector3d f = a - center;
    const double A = d.squaredNorm();
    const double C = f.squaredNorm() - radius * radius;
    if (A <= 0.0) {
        t0 = t1 = 0.0;
        return C <= 0.0;
    }
    const double B = 2.0 * f.dot(d);
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    t0 = std::max(0.0, (-B - sq) / (2.0 * A));
    t1 = std::min(1.0, (-B + sq) / (2.0 * A));
    return t0 <= t1;
}

}  // namespace

OracleGrid DdaOccupancyOracle(std::span<const Submap> submaps, const PoseSE3 &query, double voxel_size,
                              double max_depth, const OracleOptions &options) {
    if (!(voxel_size > 0.0) || !(max_depth > 0.0)) {
        throw std::invalid_argument("DdaOccupancyOracle: voxel_size and max_depth must be > 0");
    }
    const Point3 center = query.translation();
    // Pad by a voxel diagonal so voxels straddling the sphere are walked fully.
    const double radius = max_depth + std::sqrt(3.0) * voxel_size;
    std::unordered_map<VoxelIndex, Stamped, VoxelIndexHash> cells;

    for (std::size_t s = 0; s < submaps.size(); ++s) {
        const auto stamp = static_cast<std::int64_t>(s);
        std::map<std::size_t, Point3> origins;
        for (const auto &m : submaps[s].members) origins[m.timestamp_index] = m.pose.translation();
        for (const auto &p : submaps[s].points) {
            if (options.static_points_only && !IsStaticState(p.state)) continue;
            const auto it = origins.find(p.source_frame);
            if (it == origins.end()) {
                throw std::invalid_argument("DdaOccupancyOracle: point references a frame outside its submap");
            }
            const Point3 &origin = it->second;
            double t0 = 0.0, t1 = 0.0;
            if (!ClipToBall(origin, p.position, center, radius, t0, t1)) continue;
            const bool reaches_end = t1 >= 1.0;
            const Point3 from = origin + t0 * (p.position - origin);
            const Point3 to = reaches_end ? p.position : Point3(origin + t1 * (p.position - origin));
            const auto walk = TraverseVoxels(from, to, voxel_size);
            const std::size_t free_count = reaches_end ? walk.size() - 1 : walk.size();
            const VoxelIndex end_voxel = VoxelIndexOf(p.position, voxel_size);
            for (std::size_t i = 0; i < free_count; ++i) {
                if (walk[i] != end_voxel) Vote(cells[walk[i]], stamp, false);
            }
            if (reaches_end) Vote(cells[end_voxel], stamp, true);
        }
    }

    OracleGrid out;
    out.reserve(cells.size());
    for (const auto &[v, c] : cells) out.emplace(v, c.evidence);
    return out;
}

}  // namespace staticmap::synth
