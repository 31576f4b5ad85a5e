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
#include "staticmap/pipeline.hpp"

#include <tbb/info.h>
#include <tbb/task_arena.h>

#include <chrono>
#include <exception>
#include <sstream>
#include <thread>

namespace staticmap {

bool SubmapBuffer::Append(SubmapPtr submap) {
    std::unique_lock lock(mutex_);
    changed_.wait(lock, [&] { return aborted_ || items_.size() - acknowledged_ < max_backlog_; });
    if (aborted_) return false;
    if (closed_) throw std::logic_error("SubmapBuffer: append after close");
    items_.push_back(std::move(submap));
    changed_.notify_all();
    return true;
}

void SubmapBuffer::Close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    changed_.notify_all();
}

void SubmapBuffer::Abort() {
    std::lock_guard lock(mutex_);
    aborted_ = true;
    changed_.notify_all();
}

std::vector<SubmapPtr> SubmapBuffer::WaitForPrefix(std::size_t n) {
    std::unique_lock lock(mutex_);
    changed_.wait(lock, [&] { return aborted_ || closed_ || items_.size() >= n; });
    if (aborted_) return {};
    const std::size_t count = std::min(n, items_.size());
    return {items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(count)};
}

void SubmapBuffer::Acknowledge(std::size_t n) {
    std::lock_guard lock(mutex_);
    acknowledged_ = std::max(acknowledged_, std::min(n, items_.size()));
    changed_.notify_all();
}

std::vector<SubmapPtr> SubmapBuffer::Snapshot() const {
    std::lock_guard lock(mutex_);
    return items_;
}

std::size_t SubmapBuffer::size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
}

std::string PipelineStats::ToKeyValue() const {
    std::ostringstream os;
    os << "frames=" << frames << '\n'
       << "submaps=" << submaps << '\n'
       << "frontend_fps=" << frontend_fps() << '\n'
       << "backend_submaps_per_s=" << backend_submaps_per_s() << '\n'
       << "wall_seconds=" << wall_seconds << '\n';
    return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

int Concurrency(int jobs) { return jobs > 0 ? jobs : tbb::info::default_concurrency(); }

}  // namespace

PipelineResult RunPipeline(const FrameSource &source, const RunConfig &cfg, const PipelineHooks &hooks) {
    cfg.validate();
    const FrontendConfig fcfg = cfg.EffectiveFrontend();
    const BackendConfig bcfg = cfg.EffectiveBackend();
    const std::size_t n = fcfg.window_n;
    const std::size_t num_submaps = source.size() / n;
    if (num_submaps == 0) {
        throw DataError("sequence has " + std::to_string(source.size()) + " frames, fewer than window_n = " +
                        std::to_string(n));
    }

    PipelineResult result;
    result.map = GlobalMap(bcfg.voxel_size);
    result.stats.frames = num_submaps * n;
    result.stats.submaps = num_submaps;

    SubmapBuffer buffer(cfg.max_backlog);
    GroundTruthVoxels gt;
    gt.voxel_size = bcfg.voxel_size;
    bool all_labeled = true;
    std::exception_ptr frontend_error, backend_error;
    const auto start = Clock::now();

    std::thread frontend([&] {
        try {
            tbb::task_arena arena(Concurrency(cfg.jobs));
            Clock::duration busy{};
            for (std::size_t s = 0; s < num_submaps; ++s) {
                std::vector<Frame> window;
                window.reserve(n);
                auto t0 = Clock::now();
                for (std::size_t i = 0; i < n; ++i) window.push_back(source.Load(s * n + i));
                Submap submap;
                arena.execute([&] {
                    if (cfg.runs_removal()) {
                        submap = RunFrontend(window, fcfg, static_cast<std::uint32_t>(s));
                    } else {
                        submap = AssembleSubmap(window, fcfg, static_cast<std::uint32_t>(s));
                    }
                });
                busy += Clock::now() - t0;
                for (const auto &f : window) {
                    if (!f.gt_labels) {
                        all_labeled = false;
                        continue;
                    }
                    gt.Add(TransformCloud(f.cloud, f.pose), *f.gt_labels);
                }
                if (hooks.on_submap) hooks.on_submap(submap);
                if (!buffer.Append(std::make_shared<const Submap>(std::move(submap)))) break;
            }
            result.stats.frontend_seconds = Seconds(busy);
            buffer.Close();
        } catch (...) {
            frontend_error = std::current_exception();
            buffer.Abort();
        }
    });

    std::thread backend([&] {
        try {
            tbb::task_arena arena(Concurrency(cfg.jobs));
            Clock::duration busy{};
            std::vector<SubmapRef> converted;
            for (std::size_t k = 0; k < num_submaps; ++k) {
                const auto prefix = buffer.WaitForPrefix(std::min(k + 1 + cfg.query_lag, num_submaps));
                if (prefix.size() <= k) break;  // aborted
                const auto t0 = Clock::now();
                LocalMap local;
                arena.execute([&] {
                    while (converted.size() < prefix.size()) {
                        converted.push_back(std::make_shared<const BackendSubmap>(
                            BackendSubmap::FromSubmap(*prefix[converted.size()], bcfg)));
                    }
                    if (cfg.runs_backend()) {
                        local = RunBackendQuery(std::span(converted.data(), prefix.size()), *converted[k], bcfg);
                    } else {
                        local = AllStaticLocalMap(*converted[k], bcfg.voxel_size);
                    }
                    result.map.Merge(local);
                });
                busy += Clock::now() - t0;
                if (hooks.on_local_map) hooks.on_local_map(local);
                buffer.Acknowledge(k + 1);
            }
            result.stats.backend_seconds = Seconds(busy);
        } catch (...) {
            backend_error = std::current_exception();
            buffer.Abort();
        }
    });

    frontend.join();
    backend.join();
    if (frontend_error) std::rethrow_exception(frontend_error);
    if (backend_error) std::rethrow_exception(backend_error);
    result.stats.wall_seconds = Seconds(Clock::now() - start);

    if (all_labeled) result.report = Score(result.map.StaticCloud(), gt, bcfg.voxel_size);
    return result;
}

}  // namespace staticmap
