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
#include "staticmap/merging.hpp"

#include <algorithm>
#include <stdexcept>

namespace staticmap {

namespace {
void AddPoints(std::vector<TaggedPoint> &into, const std::vector<TaggedPoint> &from) {
    for (const auto &p : from) {
        const auto pos = std::lower_bound(into.begin(), into.end(), p, [](const auto &a, const auto &b) {
            return a.submap_id < b.submap_id;
        });
        if (pos != into.end() && pos->submap_id == p.submap_id) continue;
        into.insert(pos, p);
    }
}
}  // namespace

void GlobalMap::Merge(const LocalMap &local) {
    if (local.voxel_size != voxel_size_) {
        throw std::invalid_argument("GlobalMap::Merge: voxel size mismatch");
    }
    owner_poses_.emplace(local.submap_id, local.pose);
    const Point3 &origin = local.pose.translation();
    for (const auto &[v, lv] : local.voxels) {
        const double d = (VoxelCenter(v, voxel_size_) - origin).norm();
        auto [it, inserted] = voxels_.try_emplace(v);
        GlobalVoxel &gv = it->second;
        if (inserted || d < gv.owner_distance ||
            (d == gv.owner_distance && local.submap_id < gv.owner)) {
            gv.owner = local.submap_id;
            gv.owner_distance = d;
            gv.occupied = lv.is_static;
        }
        AddPoints(gv.points, lv.points);
    }
}

std::size_t GlobalMap::occupied_count() const {
    return static_cast<std::size_t>(std::count_if(voxels_.begin(), voxels_.end(),
                                                  [](const auto &kv) { return kv.second.occupied; }));
}

const GlobalVoxel *GlobalMap::find(const VoxelIndex &v) const {
    const auto it = voxels_.find(v);
    return it == voxels_.end() ? nullptr : &it->second;
}

PointCloud GlobalMap::StaticCloud() const {
    std::vector<std::pair<VoxelIndex, const GlobalVoxel *>> sorted;
    sorted.reserve(voxels_.size());
    for (const auto &[v, gv] : voxels_) {
        if (gv.occupied) sorted.emplace_back(v, &gv);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    PointCloud out;
    out.reserve(sorted.size());
    for (const auto &[v, gv] : sorted) {
        for (const auto &p : gv->points) out.push_back(p.position);
    }
    return out;
}

std::vector<LocalMap> GlobalMap::Decompose() const {
    std::map<std::uint32_t, LocalMap> by_owner;
    for (const auto &[id, pose] : owner_poses_) {
        LocalMap &lm = by_owner[id];
        lm.submap_id = id;
        lm.pose = pose;
        lm.voxel_size = voxel_size_;
    }
    for (const auto &[v, gv] : voxels_) {
        LocalVoxel lv;
        lv.is_static = gv.occupied;
        lv.points = gv.points;
        by_owner.at(gv.owner).voxels.emplace(v, std::move(lv));
    }
    std::vector<LocalMap> out;
    for (auto &[id, lm] : by_owner) {
        if (!lm.voxels.empty()) out.push_back(std::move(lm));
    }
    return out;
}

GlobalMap MergeSubmaps(std::span<const LocalMap> results, double voxel_size) {
    if (results.empty()) throw std::invalid_argument("MergeSubmaps: no results to merge");
    GlobalMap map(voxel_size);
    for (const auto &r : results) map.Merge(r);
    return map;
}

}  // namespace staticmap
