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

#include <cmath>
#include <numbers>

#include "staticmap/range_image.hpp"
#include "test_util.hpp"

using namespace staticmap;

TEST(Projection, PixelDirectionRoundTrips) {
    const ProjectionConfig cfg = ProjectionConfig::Kitti();
    for (int row = 0; row < cfg.height; row += 7) {
        for (int col = 0; col < cfg.width; col += 37) {
            const auto px = ProjectPoint(PixelDirection(row, col, cfg) * 7.5, cfg);
            ASSERT_TRUE(px);
            EXPECT_EQ(px->row, row);
            EXPECT_EQ(px->col, col);
            EXPECT_NEAR(px->range, 7.5, 1e-12);
        }
    }
}

TEST(Projection, OutOfFovAndInvalidPoints) {
    const ProjectionConfig cfg = ProjectionConfig::Synthetic();
    EXPECT_FALSE(ProjectPoint(Point3(1, 0, 1), cfg));  // 45 degrees up
    EXPECT_FALSE(ProjectPoint(Point3(0, 0, -3), cfg));
    EXPECT_THROW(ProjectPoint(Point3::Zero(), cfg), std::invalid_argument);
    EXPECT_FALSE(TryProjectPoint(Point3::Zero(), cfg));
    EXPECT_THROW(ProjectPoint(Point3(NAN, 0, 0), cfg), std::invalid_argument);
}

TEST(Projection, AzimuthWrapsToLastColumn) {
    const ProjectionConfig cfg{360, 4, 10, -10};
    const auto px = ProjectPoint(Point3(1, -1e-9, 0), cfg);
    ASSERT_TRUE(px);
    EXPECT_EQ(px->col, 359);
    EXPECT_EQ(ProjectPoint(Point3(0, 1, 0), cfg)->col, 90);
}

TEST(Projection, ValidateRejectsBadConfigs) {
    EXPECT_THROW((ProjectionConfig{0, 4, 10, -10}.validate()), std::invalid_argument);
    EXPECT_THROW((ProjectionConfig{8, 4, -10, 10}.validate()), std::invalid_argument);
    EXPECT_THROW((ProjectionConfig{8, 4, 95, -10}.validate()), std::invalid_argument);
}

TEST(RangeImage, KeepsMinimumRange) {
    const ProjectionConfig cfg = ProjectionConfig::Synthetic();
    const PointCloud cloud{Point3(10, 0, 0), Point3(4, 0, 0), Point3(7, 0, 0)};
    const RangeImage img = BuildRangeImage(cloud, cfg);
    const auto px = ProjectPoint(cloud[0], cfg);
    EXPECT_DOUBLE_EQ(img.range(px->row, px->col), 4.0);
    EXPECT_EQ(img.index(px->row, px->col), 1);
    EXPECT_EQ(img.filled_pixels(), 1u);
}

TEST(RangeImage, TieGoesToLowerIndex) {
    RangeImage img(2, 2);
    img.Offer(0, 1, 3.0, 5);
    img.Offer(0, 1, 3.0, 2);
    img.Offer(0, 1, 3.0, 9);
    EXPECT_EQ(img.index(0, 1), 2);
    EXPECT_TRUE(img.empty(1, 1));
}

TEST(RangeImage, IndependentOfInputOrder) {
    std::mt19937_64 rng(21);
    PointCloud cloud = test::RandomCloud(rng, 5000, 20.0);
    const ProjectionConfig cfg{256, 16, 15, -15};
    const RangeImage a = BuildRangeImage(cloud, cfg);
    std::vector<std::size_t> perm(cloud.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    PointCloud shuffled(cloud.size());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = cloud[perm[i]];
    const RangeImage b = BuildRangeImage(shuffled, cfg);
    EXPECT_EQ(a.out_of_fov_count(), b.out_of_fov_count());
    for (int r = 0; r < cfg.height; ++r) {
        for (int c = 0; c < cfg.width; ++c) {
            ASSERT_EQ(a.empty(r, c), b.empty(r, c));
            if (a.empty(r, c)) continue;
            EXPECT_EQ(a.range(r, c), b.range(r, c));
            EXPECT_EQ(a.index(r, c), static_cast<std::int64_t>(perm[b.index(r, c)]));
        }
    }
}

TEST(RangeImage, WallMatchesAnalyticRange) {
    const ProjectionConfig cfg{1024, 64, 15, -15};
    PointCloud cloud;
    for (int r = 0; r < cfg.height; ++r) {
        for (int c = 0; c < cfg.width; ++c) {
            const Eigen::Vector3d d = PixelDirection(r, c, cfg);
            if (d.x() > 0.2) cloud.push_back(d * (10.0 / d.x()));
        }
    }
    const RangeImage img = BuildRangeImage(cloud, cfg);
    EXPECT_EQ(img.out_of_fov_count(), 0u);
    std::size_t checked = 0;
    for (int r = 0; r < cfg.height; ++r) {
        for (int c = 0; c < cfg.width; ++c) {
            const Eigen::Vector3d d = PixelDirection(r, c, cfg);
            if (d.x() > 0.2) {
                ASSERT_FALSE(img.empty(r, c));
                EXPECT_NEAR(img.range(r, c), 10.0 / d.x(), 1e-9);
                ++checked;
            } else {
                EXPECT_TRUE(img.empty(r, c));
            }
        }
    }
    EXPECT_EQ(checked, cloud.size());
}

namespace {
PointCloud PlaneGrid(double spacing, int half) {
    PointCloud pts;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) pts.push_back(Point3(i * spacing, j * spacing, 0.0));
    return pts;
}
}  // namespace

TEST(Normals, PlaneFacesViewer) {
    const PointCloud plane = PlaneGrid(0.1, 10);
    const NormalSet n = EstimateNormals(plane, 10, Point3(0, 0, 5));
    for (std::size_t i = 0; i < n.size(); ++i) {
        ASSERT_TRUE(n.is_valid(i));
        EXPECT_NEAR(n.normals[i].z(), 1.0, 1e-9);
    }
    const NormalSet below = EstimateNormals(plane, 10, Point3(0, 0, -5));
    EXPECT_NEAR(below.normals[0].z(), -1.0, 1e-9);
}

TEST(Normals, RotationEquivariant) {
    std::mt19937_64 rng(4);
    // Irregular xy so neighbour sets have no distance ties to break differently.
    std::uniform_real_distribution<double> xy(-0.6, 0.6);
    PointCloud cloud;
    for (int i = 0; i < 300; ++i) {
        const double x = xy(rng), y = xy(rng);
        cloud.push_back(Point3(x, y, 0.3 * std::sin(3.0 * x) + 0.2 * y * y));
    }
    const PoseSE3 pose = test::RandomPose(rng, 3.0);
    const Point3 viewer(0, 0, 4);
    const NormalSet a = EstimateNormals(cloud, 12, viewer);
    const NormalSet b = EstimateNormals(TransformCloud(cloud, pose), 12, pose * viewer);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a.is_valid(i), b.is_valid(i));
        if (!a.is_valid(i)) continue;
        EXPECT_LT((pose.rotation() * a.normals[i] - b.normals[i]).norm(), 1e-6);
    }
}

TEST(Normals, DegenerateNeighbourhoodIsInvalid) {
    PointCloud line;
    for (int i = 0; i < 20; ++i) line.push_back(Point3(i * 0.1, 0, 0));
    const NormalSet n = EstimateNormals(line, 5);
    for (std::size_t i = 0; i < n.size(); ++i) EXPECT_FALSE(n.is_valid(i));
}

TEST(Normals, RejectsSmallK) {
    const PointCloud plane = PlaneGrid(0.1, 3);
    EXPECT_THROW(EstimateNormals(plane, 2), std::invalid_argument);
    EXPECT_THROW(EstimateNormals(PointCloud(2, Point3(1, 0, 0)), 3), std::invalid_argument);
}

TEST(IncidentAngle, KnownAngles) {
    EXPECT_NEAR(*IncidentAngleDeg(Point3(3, 0, 0), Eigen::Vector3d(-1, 0, 0)), 0.0, 1e-9);
    EXPECT_NEAR(*IncidentAngleDeg(Point3(3, 0, 0), Eigen::Vector3d(0, 1, 0)), 90.0, 1e-9);
    EXPECT_NEAR(*IncidentAngleDeg(Point3(3, 0, 0), Eigen::Vector3d(1, 1, 0)), 45.0, 1e-9);
    EXPECT_FALSE(IncidentAngleDeg(Point3::Zero(), Eigen::Vector3d(1, 0, 0)));
    EXPECT_FALSE(IncidentAngleDeg(Point3(1, 0, 0), Eigen::Vector3d::Zero()));
}
