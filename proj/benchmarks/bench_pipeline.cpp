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

// Stage-level timings on 32 x 1024 synthetic scans.
#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "staticmap/backend.hpp"
#include "staticmap/config.hpp"
#include "staticmap/evaluation.hpp"
#include "staticmap/frontend.hpp"
#include "staticmap/geometry.hpp"
#include "staticmap/merging.hpp"
#include "staticmap/range_image.hpp"
#include "staticmap/synth.hpp"

using namespace staticmap;

namespace {

struct Fixture {
    synth::SceneSpec spec;
    RunConfig cfg;
    std::vector<Frame> frames;
    std::vector<Submap> submaps;
    std::vector<SubmapRef> refs;

    Fixture() : spec(synth::CrowdCorridor(5, 10, 60)) {
        spec.projection = ProjectionConfig::Synthetic();
        cfg.frontend.projection = spec.projection;
        frames = synth::GenerateSequence(spec);
        const auto fcfg = cfg.EffectiveFrontend();
        const auto bcfg = cfg.EffectiveBackend();
        const std::size_t n = fcfg.window_n;
        for (std::size_t s = 0; s + n <= frames.size(); s += n) {
            submaps.push_back(RunFrontend(std::span(frames.data() + s, n), fcfg, static_cast<std::uint32_t>(s / n)));
            refs.push_back(std::make_shared<const BackendSubmap>(BackendSubmap::FromSubmap(submaps.back(), bcfg)));
        }
    }
    std::span<const Frame> window(std::size_t k) const {
        const std::size_t n = cfg.frontend.window_n;
        return {frames.data() + k * n, n};
    }
};

const Fixture &Data() {
    static const Fixture f;
    return f;
}

void BM_RangeImage(benchmark::State &state) {
    const auto &d = Data();
    for (auto _ : state) benchmark::DoNotOptimize(BuildRangeImage(d.frames[0].cloud, d.spec.projection));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RangeImage)->Unit(benchmark::kMillisecond);

void BM_VisibilityRemoval(benchmark::State &state) {
    const auto &d = Data();
    const auto fcfg = d.cfg.EffectiveFrontend();
    const Submap assembled = AssembleSubmap(d.window(1), fcfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(VisibilityRemoval(assembled, d.window(1), fcfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fcfg.window_n));
}
BENCHMARK(BM_VisibilityRemoval)->Unit(benchmark::kMillisecond);

void BM_MapBasedRevert(benchmark::State &state) {
    const auto &d = Data();
    const auto fcfg = d.cfg.EffectiveFrontend();
    const Submap removed = VisibilityRemoval(AssembleSubmap(d.window(1), fcfg, 1), d.window(1), fcfg);
    for (auto _ : state) benchmark::DoNotOptimize(MapBasedRevert(removed, fcfg));
}
BENCHMARK(BM_MapBasedRevert)->Unit(benchmark::kMillisecond);

// Items are scans, so items_per_second reads as front-end fps.
void BM_Frontend(benchmark::State &state) {
    const auto &d = Data();
    const auto fcfg = d.cfg.EffectiveFrontend();
    for (auto _ : state) benchmark::DoNotOptimize(RunFrontend(d.window(2), fcfg, 2));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fcfg.window_n));
}
BENCHMARK(BM_Frontend)->Unit(benchmark::kMillisecond);

void BM_NormalEstimation(benchmark::State &state) {
    const auto &d = Data();
    const auto &points = d.refs[2]->points;
    for (auto _ : state) benchmark::DoNotOptimize(EstimateNormals(points, 10));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}
BENCHMARK(BM_NormalEstimation)->Unit(benchmark::kMillisecond);

void BM_VisibilityCheck(benchmark::State &state) {
    const auto &d = Data();
    const auto bcfg = d.cfg.EffectiveBackend();
    const auto nearby = QueryNearbySubmaps(d.refs, d.refs[3]->pose, bcfg.query_radius);
    for (auto _ : state) benchmark::DoNotOptimize(VisibilityCheck(nearby, d.refs[3]->pose, bcfg));
}
BENCHMARK(BM_VisibilityCheck)->Unit(benchmark::kMillisecond);

// Items are submaps, so items_per_second reads as back-end submaps/s.
void BM_BackendQuery(benchmark::State &state) {
    const auto &d = Data();
    const auto bcfg = d.cfg.EffectiveBackend();
    for (auto _ : state) benchmark::DoNotOptimize(RunBackendQuery(d.refs, *d.refs[3], bcfg));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BackendQuery)->Unit(benchmark::kMillisecond);

void BM_Merge(benchmark::State &state) {
    const auto &d = Data();
    const auto bcfg = d.cfg.EffectiveBackend();
    std::vector<LocalMap> locals;
    for (const auto &r : d.refs) locals.push_back(RunBackendQuery(d.refs, *r, bcfg));
    for (auto _ : state) benchmark::DoNotOptimize(MergeSubmaps(locals, bcfg.voxel_size));
}
BENCHMARK(BM_Merge)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State &state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::bernoulli_distribution dyn(0.1);
    PointCloud pts;
    std::vector<Label> labels;
    for (int i = 0; i < 200000; ++i) {
        pts.emplace_back(u(rng), u(rng), 0.1 * u(rng));
        labels.push_back(dyn(rng) ? Label::Dynamic : Label::Static);
    }
    const auto gt = VoxelizeGroundTruth(pts, labels, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(Score(pts, gt, 0.2));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}
BENCHMARK(BM_Score)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
