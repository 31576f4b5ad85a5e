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

#include "staticmap/frontend.hpp"
#include "test_util.hpp"

using namespace staticmap;

namespace {
// A wall at x = 10 seen from the origin; the middle frame additionally sees a
// box face at x = 5 covering azimuths within +-10 degrees.
std::vector<Frame> BoxInFrontOfWall(const ProjectionConfig &cfg) {
    std::vector<Frame> frames(3);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        frames[f].timestamp_index = f;
        for (int r = 0; r < cfg.height; ++r) {
            for (int c = 0; c < cfg.width; ++c) {
                const Eigen::Vector3d d = PixelDirection(r, c, cfg);
                if (d.x() < 0.5) continue;
                const bool box = f == 1 && std::abs(std::atan2(d.y(), d.x())) < 10.0 * M_PI / 180.0;
                frames[f].cloud.push_back(d * ((box ? 5.0 : 10.0) / d.x()));
            }
        }
    }
    return frames;
}

FrontendConfig SmallConfig() {
    FrontendConfig cfg;
    cfg.window_n = 3;
    cfg.projection = {360, 16, 15, -15};
    return cfg;
}

Submap PlaneSubmap(std::initializer_list<Point3> dynamic_points) {
    Submap s;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j)
            s.points.push_back({Point3(i * 0.05, j * 0.05, 0.0), PointState::RawStatic});
    for (const auto &p : dynamic_points) s.points.push_back({p, PointState::Dynamic});
    return s;
}
}  // namespace

TEST(Frontend, BoxSeenOnceIsDynamic) {
    const FrontendConfig cfg = SmallConfig();
    const auto frames = BoxInFrontOfWall(cfg.projection);
    const Submap s = VisibilityRemoval(AssembleSubmap(frames, cfg, 0), frames, cfg);
    std::size_t box = 0, box_dynamic = 0, wall_dynamic = 0;
    for (const auto &p : s.points) {
        const bool is_box = std::abs(p.position.x() - 5.0) < 1e-9;
        if (is_box) {
            ++box;
            box_dynamic += p.state == PointState::Dynamic;
        } else {
            wall_dynamic += p.state == PointState::Dynamic;
        }
    }
    EXPECT_GT(box, 0u);
    EXPECT_EQ(box_dynamic, box);
    EXPECT_EQ(wall_dynamic, 0u);
}

TEST(Frontend, LargeThresholdFlagsNothing) {
    FrontendConfig cfg = SmallConfig();
    cfg.range_diff_threshold = 6.0;
    const auto frames = BoxInFrontOfWall(cfg.projection);
    const Submap s = VisibilityRemoval(AssembleSubmap(frames, cfg, 0), frames, cfg);
    EXPECT_EQ(s.CountState(PointState::Dynamic), 0u);
}

TEST(Frontend, DynamicCountMonotoneInThreshold) {
    FrontendConfig cfg = SmallConfig();
    std::mt19937_64 rng(2);
    auto frames = BoxInFrontOfWall(cfg.projection);
    std::normal_distribution<double> noise(0.0, 0.3);
    for (auto &f : frames)
        for (auto &p : f.cloud) p *= 1.0 + noise(rng) / p.norm();
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (const double tau : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
        cfg.range_diff_threshold = tau;
        const Submap s = VisibilityRemoval(AssembleSubmap(frames, cfg, 0), frames, cfg);
        const std::size_t n = s.CountState(PointState::Dynamic);
        EXPECT_LE(n, previous) << "tau " << tau;
        previous = n;
    }
}

TEST(Frontend, AssembleTransformsToWorldAndRecordsProvenance) {
    FrontendConfig cfg = SmallConfig();
    auto frames = BoxInFrontOfWall(cfg.projection);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        frames[f].pose = PoseSE3::FromYaw(0.1 * f, Eigen::Vector3d(f, 0, 0));
        frames[f].timestamp_index = 40 + f;
    }
    const Submap s = AssembleSubmap(frames, cfg, 7);
    EXPECT_EQ(s.id, 7u);
    ASSERT_EQ(s.members.size(), 3u);
    EXPECT_EQ(s.members[2].timestamp_index, 42u);
    const auto &last = s.points.back();
    EXPECT_EQ(last.source_frame, 42u);
    EXPECT_LT((last.position - frames[2].pose * frames[2].cloud[last.source_point]).norm(), 1e-12);
}

TEST(Frontend, WrongWindowSizeThrows) {
    const FrontendConfig cfg = SmallConfig();
    auto frames = BoxInFrontOfWall(cfg.projection);
    frames.pop_back();
    EXPECT_THROW(RunFrontend(frames, cfg, 0), std::invalid_argument);
    EXPECT_THROW(AssembleSubmap({}, cfg, 0), std::invalid_argument);
}

TEST(Frontend, ConfigValidation) {
    FrontendConfig cfg;
    cfg.window_n = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.revert_k = 2;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.range_diff_threshold = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Revert, CoplanarPointIsReverted) {
    const FrontendConfig cfg;
    const Submap s = MapBasedRevert(PlaneSubmap({Point3(0.26, 0.24, 0.0)}), cfg);
    EXPECT_EQ(s.points.back().state, PointState::Reverted);
}

TEST(Revert, OffPlanePointStaysDynamic) {
    FrontendConfig cfg;
    cfg.revert_search_radius = 3.0;
    cfg.revert_dist_eps = 0.1;
    const Submap s = MapBasedRevert(PlaneSubmap({Point3(0.26, 0.24, 1.0)}), cfg);
    EXPECT_EQ(s.points.back().state, PointState::Dynamic);
}

TEST(Revert, NoSupportWithinRadiusStaysDynamic) {
    const FrontendConfig cfg;
    const Submap s = MapBasedRevert(PlaneSubmap({Point3(5, 5, 0)}), cfg);
    EXPECT_EQ(s.points.back().state, PointState::Dynamic);
}

TEST(Revert, EvaluateRevertReportsGeometry) {
    PointCloud plane;
    for (const auto &p : PlaneSubmap({}).points) plane.push_back(p.position);
    const RevertDecision in = EvaluateRevert(plane, Point3(0.1, 0.1, 0.0));
    EXPECT_TRUE(in.eligible);
    EXPECT_NEAR(in.plane_distance, 0.0, 1e-12);
    EXPECT_NEAR(in.normal_angle_deg, 0.0, 1e-6);
    const RevertDecision off = EvaluateRevert(plane, Point3(0.1, 0.1, 0.3));
    EXPECT_NEAR(off.plane_distance, 0.3, 1e-12);
    EXPECT_GT(off.normal_angle_deg, 0.0);
    EXPECT_FALSE(EvaluateRevert(PointCloud(3, Point3::Zero()), Point3(1, 0, 0)).eligible);
}

TEST(Revert, AblationSwitchesIgnoreTheirTest) {
    FrontendConfig cfg;
    cfg.revert_search_radius = 3.0;
    cfg.revert_angle_eps_deg = 90.0;
    cfg.revert_use_distance = false;
    const Submap s = MapBasedRevert(PlaneSubmap({Point3(0.26, 0.24, 0.02)}), cfg);
    EXPECT_EQ(s.points.back().state, PointState::Reverted);
}

TEST(Frontend, PartitionAndDeterminism) {
    FrontendConfig cfg = SmallConfig();
    auto frames = BoxInFrontOfWall(cfg.projection);
    // Ground plane under the box so some removed points are reverted.
    for (auto &f : frames)
        for (int i = 0; i < 60; ++i)
            for (int j = -20; j <= 20; ++j) f.cloud.push_back(Point3(2 + 0.1 * i, 0.1 * j, -1.0));
    const Submap raw = VisibilityRemoval(AssembleSubmap(frames, cfg, 0), frames, cfg);
    const Submap a = RunFrontend(frames, cfg, 0);
    const Submap b = RunFrontend(frames, cfg, 0);
    ASSERT_EQ(a.points.size(), raw.points.size());
    std::size_t reverted = 0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].state, b.points[i].state);
        if (raw.points[i].state == PointState::RawStatic) {
            EXPECT_EQ(a.points[i].state, PointState::RawStatic);
        } else {
            EXPECT_NE(a.points[i].state, PointState::RawStatic);
            reverted += a.points[i].state == PointState::Reverted;
        }
    }
    EXPECT_EQ(raw.CountState(PointState::Dynamic),
              a.CountState(PointState::Dynamic) + a.CountState(PointState::Reverted));
    EXPECT_EQ(a.CountState(PointState::Reverted), reverted);
}
