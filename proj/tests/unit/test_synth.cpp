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

#include "staticmap/synth.hpp"
#include "test_util.hpp"

using namespace staticmap;
using namespace staticmap::synth;

namespace {
SceneSpec GroundOnly() {
    SceneSpec s;
    s.num_frames = 1;
    s.projection = {128, 16, 15, -15};
    s.ground_z = -1.0;
    s.sensor.waypoints = {Eigen::Vector3d(0, 0, 0)};
    s.sensor.speed = 0.0;
    return s;
}
}  // namespace

TEST(Synth, GroundPlaneRange) {
    const SceneSpec s = GroundOnly();
    const Frame f = GenerateFrame(s, 0);
    std::size_t expected = 0;
    for (int r = 0; r < s.projection.height; ++r) {
        const double z = PixelDirection(r, 0, s.projection).z();
        if (z < 0 && 1.0 / -z <= s.max_range) expected += s.projection.width;
    }
    ASSERT_EQ(f.cloud.size(), expected);
    for (const auto &p : f.cloud) {
        const auto px = ProjectPoint(p, s.projection);
        ASSERT_TRUE(px);
        const double elev = std::asin(PixelDirection(px->row, px->col, s.projection).z());
        EXPECT_NEAR(p.norm(), 1.0 / std::sin(std::abs(elev)), 1e-9);
        EXPECT_NEAR(p.z(), -1.0, 1e-9);
    }
    for (const auto l : *f.gt_labels) EXPECT_EQ(l, Label::Static);
}

TEST(Synth, CrossingAgentIsDynamicAtFiveMeters) {
    SceneSpec s = GroundOnly();
    Agent a;
    a.waypoints = {Eigen::Vector2d(5, -3), Eigen::Vector2d(5, 3)};
    a.loop = false;
    a.speed = 1.0;
    a.phase = 3.0;  // at y = 0 when t = 0
    s.agents.push_back(a);
    const Frame f = GenerateFrame(s, 0);
    std::size_t dynamic = 0;
    for (std::size_t i = 0; i < f.cloud.size(); ++i) {
        const Point3 &p = f.cloud[i];
        const bool on_agent = std::abs(std::hypot(p.x() - 5, p.y()) - a.radius) < 1e-6 && p.z() < 1.7;
        EXPECT_EQ((*f.gt_labels)[i] == Label::Dynamic, on_agent) << p.transpose();
        dynamic += on_agent;
    }
    EXPECT_GT(dynamic, 0u);
    const auto hit = CastRay(s, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), 0.0);
    ASSERT_TRUE(hit);
    EXPECT_TRUE(hit->dynamic);
    EXPECT_NEAR(hit->range, 5.0 - a.radius, 1e-9);
}

TEST(Synth, AgentMotionAlongPath) {
    Agent a;
    a.waypoints = {Eigen::Vector2d(0, 0), Eigen::Vector2d(4, 0)};
    a.speed = 2.0;
    a.loop = false;
    EXPECT_NEAR(a.ShapeAt(1.0).center.x(), 2.0, 1e-12);
    EXPECT_NEAR(a.ShapeAt(10.0).center.x(), 4.0, 1e-12);
    a.loop = true;
    EXPECT_NEAR(a.ShapeAt(3.0).center.x(), 2.0, 1e-12);  // 6 m around a closed 8 m loop
}

TEST(Synth, SensorPoseFollowsTrajectory) {
    SceneSpec s = GroundOnly();
    s.sensor.waypoints = {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 10, 1)};
    s.sensor.speed = 2.0;
    const PoseSE3 p = s.SensorPose(10);  // one second in
    EXPECT_LT((p.translation() - Eigen::Vector3d(0, 2, 1)).norm(), 1e-12);
    EXPECT_LT((p * Point3(1, 0, 0) - Point3(0, 3, 1)).norm(), 1e-12);
}

TEST(Synth, Deterministic) {
    SceneSpec s = FlatGround(3, 4, 3);
    s.projection = {256, 16, 15, -15};
    s.range_noise_sigma = 0.02;
    const auto a = GenerateSequence(s), b = GenerateSequence(s);
    ASSERT_EQ(a.size(), 3u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].cloud, b[i].cloud);
        EXPECT_EQ(*a[i].gt_labels, *b[i].gt_labels);
        EXPECT_EQ(GenerateFrame(s, i).cloud, a[i].cloud);
    }
    SceneSpec other = s;
    other.seed = 4;
    EXPECT_NE(GenerateFrame(other, 1).cloud, a[1].cloud);
}

TEST(Synth, DynamicFractionMatchesGeometricRecount) {
    SceneSpec s = CrowdCorridor(1, 10, 1);
    s.projection = {512, 32, 15, -15};
    const Frame f = GenerateFrame(s, 0);
    std::vector<VerticalCylinder> shapes;
    for (const auto &a : s.agents) shapes.push_back(a.ShapeAt(0.0));
    std::size_t labeled = 0, recount = 0;
    for (std::size_t i = 0; i < f.cloud.size(); ++i) {
        labeled += (*f.gt_labels)[i] == Label::Dynamic;
        const Point3 w = f.pose * f.cloud[i];
        for (const auto &c : shapes) {
            const double radial = (w.head<2>() - c.center).norm();
            const bool side = std::abs(radial - c.radius) < 1e-5 && w.z() >= c.z_min - 1e-5 && w.z() <= c.z_max + 1e-5;
            const bool cap = radial <= c.radius + 1e-5 && std::abs(w.z() - c.z_max) < 1e-5;
            if (side || cap) {
                ++recount;
                break;
            }
        }
    }
    const double n = static_cast<double>(f.cloud.size());
    EXPECT_NEAR(labeled / n, recount / n, 0.02);
}

TEST(Synth, SceneRoundTrip) {
    const SceneSpec s = CrowdCorridor(5, 3, 12);
    const std::string text = SerializeScene(s);
    const SceneSpec back = ParseScene(text);
    EXPECT_EQ(SerializeScene(back), text);
    EXPECT_EQ(back.agents.size(), 3u);
    EXPECT_EQ(back.num_frames, 12u);
    EXPECT_EQ(GenerateFrame(back, 4).cloud, GenerateFrame(s, 4).cloud);
}

TEST(Synth, ParseErrors) {
    const std::string base = "num_frames = 2\nsensor_waypoints = 0 0 1\n";
    EXPECT_NO_THROW(ParseScene(base));
    try {
        ParseScene(base + "bogus = 3\n");
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(ParseScene(base + "[agent]\nwings = 2\n"), std::invalid_argument);
    EXPECT_THROW(ParseScene(base + "[tree]\n"), std::invalid_argument);
    EXPECT_THROW(ParseScene(base + "[box]\nmin = 0 0\n"), std::invalid_argument);
    EXPECT_THROW(ParseScene(base + "num_frames = abc\n"), std::invalid_argument);
    EXPECT_THROW(PresetScene("mars", 1), std::invalid_argument);
}

TEST(Synth, ValidateRejectsBadSpecs) {
    SceneSpec s = GroundOnly();
    s.num_frames = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = GroundOnly();
    s.boxes.push_back({Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(0, 2, 2)});
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = GroundOnly();
    s.agents.push_back(Agent{});
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Synth, PresetsAreValid) {
    for (const auto *name : {"crowd", "corridor", "square", "flat"}) {
        const SceneSpec s = PresetScene(name, 2);
        EXPECT_NO_THROW(s.validate()) << name;
    }
    EXPECT_TRUE(StaticCorridor(1).agents.empty());
}
