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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace {
int RunCli(const std::string &args, const std::filesystem::path &log) {
    const std::string cmd = std::string("\"") + STATICMAP_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void WriteSmallScene(const std::filesystem::path &p) {
    std::ofstream(p) << "seed = 3\nnum_frames = 10\nwidth = 128\nheight = 16\nground_z = -1\n"
                        "sensor_speed = 1\nsensor_waypoints = 0 0 0; 10 0 0\n"
                        "[box]\nmin = -5 4 -1\nmax = 20 5 2\n"
                        "[agent]\nspeed = 1\nwaypoints = 3 -2; 3 2\n";
}
}  // namespace

TEST(Cli, HelpAndUsageErrors) {
    staticmap::test::TempDir dir("cli_usage");
    EXPECT_EQ(RunCli("--help", dir / "log"), 0);
    EXPECT_EQ(RunCli("", dir / "log"), 1);
    EXPECT_EQ(RunCli("run --preset crowd --no-such-flag", dir / "log"), 1);
    EXPECT_EQ(RunCli("run --preset marsbase", dir / "log"), 1);
    EXPECT_EQ(RunCli("run --preset crowd --mode turbo", dir / "log"), 1);
    EXPECT_EQ(RunCli("run --preset crowd --voxel_size abc", dir / "log"), 1);
    EXPECT_EQ(RunCli("synth --preset crowd", dir / "log"), 1);
}

TEST(Cli, DataErrors) {
    staticmap::test::TempDir dir("cli_data");
    EXPECT_EQ(RunCli("run --kitti \"" + (dir / "missing").string() + "\"", dir / "log"), 2);
    std::ofstream(dir / "bad.ply") << "not a ply\n";
    EXPECT_EQ(RunCli("export -i \"" + (dir / "bad.ply").string() + "\" -o \"" + (dir / "out.pcd").string() + "\"",
                  dir / "log"),
              2);
}

TEST(Cli, RunSynthEvalExport) {
    staticmap::test::TempDir dir("cli_run");
    WriteSmallScene(dir / "scene.txt");
    const std::string scene = "--scene \"" + (dir / "scene.txt").string() + "\"";
    const std::string map = (dir / "map.ply").string();
    ASSERT_EQ(RunCli("run " + scene + " --window-n 5 --query_lag 1 --max_backlog 2 --jobs 1 -o \"" + map + "\"",
                  dir / "log"),
              0)
        << Slurp(dir / "log");
    const std::string out = Slurp(dir / "log");
    EXPECT_NE(out.find("frontend_fps="), std::string::npos) << out;
    EXPECT_NE(out.find("backend_submaps_per_s="), std::string::npos);
    EXPECT_NE(out.find("pr="), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(map));

    ASSERT_EQ(RunCli("eval " + scene + " --map \"" + map + "\" --window_n 5", dir / "log"), 0) << Slurp(dir / "log");
    EXPECT_NE(Slurp(dir / "log").find("rr="), std::string::npos);

    const std::string pcd = (dir / "map.pcd").string();
    ASSERT_EQ(RunCli("export -i \"" + map + "\" -o \"" + pcd + "\"", dir / "log"), 0);
    EXPECT_NE(Slurp(pcd).find("DATA ascii"), std::string::npos);

    ASSERT_EQ(RunCli("synth " + scene + " --out \"" + (dir / "seq").string() + "\"", dir / "log"), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "seq" / "velodyne" / "000009.bin"));
    ASSERT_EQ(RunCli("run --kitti \"" + (dir / "seq").string() + "\" --width 128 --height 16 --window_n 5 "
                  "--query_lag 1 --max_backlog 2 --mode frontend-only",
                  dir / "log"),
              0)
        << Slurp(dir / "log");
    EXPECT_NE(Slurp(dir / "log").find("mode=frontend-only"), std::string::npos);
}
