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

#include <algorithm>

#include "staticmap/geometry.hpp"
#include "test_util.hpp"

using namespace staticmap;

namespace {
std::vector<Neighbor> BruteKnn(const PointCloud &pts, const Point3 &q, std::size_t k, double radius) {
    std::vector<Neighbor> all;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        const double d = (pts[i] - q).squaredNorm();
        if (d <= radius * radius) all.push_back({i, d});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor &a, const Neighbor &b) {
        return a.squared_distance < b.squared_distance ||
               (a.squared_distance == b.squared_distance && a.index < b.index);
    });
    if (all.size() > k) all.resize(k);
    return all;
}
}  // namespace

TEST(KdTree, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    const PointCloud pts = test::RandomCloud(rng, 2000);
    const KdTree tree(pts);
    for (const auto &q : test::RandomCloud(rng, 200, 6.0)) {
        for (const double radius : {0.5, 2.0, 1e9}) {
            const auto got = tree.Knn(q, 15, radius);
            const auto want = BruteKnn(pts, q, 15, radius);
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_EQ(got[i].index, want[i].index);
                EXPECT_DOUBLE_EQ(got[i].squared_distance, want[i].squared_distance);
            }
        }
    }
}

TEST(KdTree, TiesBrokenByIndex) {
    PointCloud pts(40, Point3(1, 1, 1));
    const KdTree tree(pts);
    const auto got = tree.Knn(Point3(1, 1, 1), 5);
    ASSERT_EQ(got.size(), 5u);
    for (std::uint32_t i = 0; i < 5; ++i) EXPECT_EQ(got[i].index, i);
}

TEST(KdTree, EmptyTree) {
    const KdTree tree(PointCloud{});
    EXPECT_TRUE(tree.Knn(Point3::Zero(), 3).empty());
}

TEST(FitPlane, RecoversTiltedPlane) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    const Eigen::Vector3d n = Eigen::Vector3d(0.2, -0.3, 1.0).normalized();
    const Eigen::Vector3d a = n.unitOrthogonal(), b = n.cross(a);
    PointCloud pts;
    for (int i = 0; i < 100; ++i) pts.push_back(Point3(3, 4, 5) + u(rng) * a + u(rng) * b);
    const PlaneFit fit = FitPlane(pts);
    EXPECT_FALSE(fit.degenerate);
    EXPECT_NEAR(std::abs(fit.normal.dot(n)), 1.0, 1e-9);
    EXPECT_NEAR(fit.eigenvalues[0], 0.0, 1e-9);
}

TEST(FitPlane, DegenerateInputs) {
    EXPECT_TRUE(FitPlane(PointCloud{Point3(0, 0, 0), Point3(1, 0, 0)}).degenerate);
    PointCloud line;
    for (int i = 0; i < 10; ++i) line.push_back(Point3(i, 0, 0));
    EXPECT_TRUE(FitPlane(line).degenerate);
    EXPECT_TRUE(FitPlane(PointCloud(5, Point3(1, 2, 3))).degenerate);
}

TEST(FitPlane, IndexedWithExtraMatchesExplicitSet) {
    std::mt19937_64 rng(6);
    const PointCloud pts = test::RandomCloud(rng, 30, 1.0);
    const std::vector<std::uint32_t> idx{1, 4, 7, 9, 12, 20};
    const Point3 extra(0.3, 0.2, 0.1);
    PointCloud explicit_set;
    for (auto i : idx) explicit_set.push_back(pts[i]);
    explicit_set.push_back(extra);
    const PlaneFit a = FitPlane(pts, idx, &extra), b = FitPlane(explicit_set);
    EXPECT_LT((a.centroid - b.centroid).norm(), 1e-12);
    EXPECT_NEAR(std::abs(a.normal.dot(b.normal)), 1.0, 1e-9);
}

TEST(VoxelDownsample, KeepsFirstPointPerVoxel) {
    const PointCloud pts{Point3(0.05, 0.05, 0.05), Point3(0.15, 0.1, 0.1), Point3(0.25, 0, 0),
                         Point3(-0.05, 0, 0)};
    const auto kept = VoxelDownsample(pts, 0.2);
    EXPECT_EQ(kept, (std::vector<std::uint32_t>{0, 2, 3}));
}
