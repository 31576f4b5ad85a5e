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
#include <gtest/gtest.h>

#include <cstdlib>

#include "staticmap/oracle.hpp"
#include "test_util.hpp"

using namespace staticmap;
using namespace staticmap::synth;

TEST(Traverse, OneMeterAlongX) {
    const auto walk = TraverseVoxels(Point3(0.1, 0.1, 0.1), Point3(1.1, 0.1, 0.1), 0.2);
    ASSERT_EQ(walk.size(), 6u);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(walk[i], (VoxelIndex{i, 0, 0}));
}

TEST(Traverse, ZeroLength) {
    const auto walk = TraverseVoxels(Point3(0.3, -0.3, 2), Point3(0.3, -0.3, 2), 0.2);
    EXPECT_EQ(walk, (std::vector<VoxelIndex>{VoxelIndex{1, -2, 10}}));
}

TEST(Traverse, NegativeAxisAligned) {
    const auto walk = TraverseVoxels(Point3(0.1, 0.5, 0.5), Point3(-0.9, 0.5, 0.5), 1.0);
    EXPECT_EQ(walk, (std::vector<VoxelIndex>{VoxelIndex{0, 0, 0}, VoxelIndex{-1, 0, 0}}));
}

TEST(Traverse, FaceConnectedAndEndsAtTarget) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 500; ++t) {
        const auto pts = test::RandomCloud(rng, 2, 6.0);
        const auto walk = TraverseVoxels(pts[0], pts[1], 0.2);
        ASSERT_EQ(walk.front(), VoxelIndexOf(pts[0], 0.2));
        ASSERT_EQ(walk.back(), VoxelIndexOf(pts[1], 0.2));
        const VoxelIndex a = walk.front(), b = walk.back();
        EXPECT_EQ(walk.size(), 1u + std::abs(a.ix - b.ix) + std::abs(a.iy - b.iy) + std::abs(a.iz - b.iz));
        for (std::size_t i = 1; i < walk.size(); ++i) {
            const int step = std::abs(walk[i].ix - walk[i - 1].ix) + std::abs(walk[i].iy - walk[i - 1].iy) +
                             std::abs(walk[i].iz - walk[i - 1].iz);
            EXPECT_EQ(step, 1);
        }
    }
}

namespace {
Submap RaySubmap(std::initializer_list<Point3> endpoints) {
    Submap s;
    s.members.push_back({0, PoseSE3::FromTranslation({0.5, 0.5, 0.5})});
    for (const auto &p : endpoints) s.points.push_back({p, PointState::RawStatic, 0, 0});
    return s;
}
}  // namespace

TEST(Oracle, SingleRayMarksFreeThenOccupied) {
    const std::vector<Submap> subs{RaySubmap({Point3(5.5, 0.5, 0.5)})};
    const OracleGrid g = DdaOccupancyOracle(subs, PoseSE3{}, 1.0, 50.0);
    ASSERT_EQ(g.size(), 6u);
    for (int i = 0; i < 5; ++i) {
        const auto &e = g.at(VoxelIndex{i, 0, 0});
        EXPECT_EQ(e.n_occ, 0u);
        EXPECT_EQ(e.n_free, 1u);
    }
    EXPECT_EQ(g.at(VoxelIndex{5, 0, 0}).n_occ, 1u);
    EXPECT_EQ(g.at(VoxelIndex{5, 0, 0}).probability(), 1.0);
}

TEST(Oracle, OneVotePerSubmapAndOccupiedWins) {
    // Ray 2 passes through the voxel ray 1 ends in.
    const std::vector<Submap> subs{RaySubmap({Point3(3.5, 0.5, 0.5), Point3(6.5, 0.5, 0.5), Point3(6.6, 0.6, 0.6)}),
                                   RaySubmap({Point3(6.5, 0.5, 0.5)})};
    const OracleGrid g = DdaOccupancyOracle(subs, PoseSE3{}, 1.0, 50.0);
    const auto &three = g.at(VoxelIndex{3, 0, 0});
    EXPECT_EQ(three.n_occ, 1u);
    EXPECT_EQ(three.n_free, 1u);
    const auto &six = g.at(VoxelIndex{6, 0, 0});
    EXPECT_EQ(six.n_occ, 2u);
    EXPECT_EQ(six.n_free, 0u);
    EXPECT_EQ(g.at(VoxelIndex{1, 0, 0}).n_free, 2u);
}

TEST(Oracle, OccupiedAndFreeStaticAndDynamicSetsAreDisjointPerSubmap) {
    std::mt19937_64 rng(8);
    Submap s = RaySubmap({});
    for (const auto &p : test::RandomCloud(rng, 400, 10.0)) s.points.push_back({p, PointState::RawStatic, 0, 0});
    const OracleGrid g = DdaOccupancyOracle(std::vector<Submap>{s}, PoseSE3{}, 0.5, 100.0);
    VoxelSet ends;
    for (const auto &p : s.points) ends.insert(VoxelIndexOf(p.position, 0.5));
    for (const auto &[v, e] : g) {
        EXPECT_EQ(e.n_occ + e.n_free, 1u);
        EXPECT_EQ(e.n_occ == 1, ends.contains(v));
    }
    for (const auto &v : ends) EXPECT_TRUE(g.contains(v));
}

TEST(Oracle, DynamicPointsSkippedByDefault) {
    Submap s = RaySubmap({Point3(3.5, 0.5, 0.5)});
    s.points[0].state = PointState::Dynamic;
    EXPECT_TRUE(DdaOccupancyOracle(std::vector<Submap>{s}, PoseSE3{}, 1.0, 50.0).empty());
    EXPECT_EQ(DdaOccupancyOracle(std::vector<Submap>{s}, PoseSE3{}, 1.0, 50.0, {false}).size(), 4u);
}

TEST(Oracle, RaysClippedToDepthBall) {
    const std::vector<Submap> subs{RaySubmap({Point3(30.5, 0.5, 0.5)})};
    const OracleGrid g = DdaOccupancyOracle(subs, PoseSE3::FromTranslation({0.5, 0.5, 0.5}), 1.0, 10.0);
    EXPECT_FALSE(g.contains(VoxelIndex{30, 0, 0}));
    EXPECT_TRUE(g.contains(VoxelIndex{10, 0, 0}));
    EXPECT_FALSE(g.contains(VoxelIndex{13, 0, 0}));
}

TEST(Oracle, Errors) {
    Submap s = RaySubmap({Point3(1, 0, 0)});
    s.points[0].source_frame = 3;
    EXPECT_THROW(DdaOccupancyOracle(std::vector<Submap>{s}, PoseSE3{}, 1.0, 10.0), std::invalid_argument);
    EXPECT_THROW(DdaOccupancyOracle({}, PoseSE3{}, 0.0, 10.0), std::invalid_argument);
}
