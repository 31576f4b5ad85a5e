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
#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "staticmap/config.hpp"
#include "staticmap/dataset_io.hpp"
#include "staticmap/evaluation.hpp"
#include "staticmap/merging.hpp"
#include "staticmap/synth.hpp"

namespace staticmap {

/// Frames consumed in order by the front-end.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::size_t size() const = 0;
    /// May throw DataError.
    virtual Frame Load(std::size_t i) const = 0;
};

class VectorFrameSource final : public FrameSource {
public:
    explicit VectorFrameSource(std::vector<Frame> frames) : frames_(std::move(frames)) {}
    std::size_t size() const override { return frames_.size(); }
    Frame Load(std::size_t i) const override { return frames_.at(i); }

private:
    std::vector<Frame> frames_;
};

class KittiFrameSource final : public FrameSource {
public:
    explicit KittiFrameSource(SequenceSource seq) : seq_(std::move(seq)) {}
    std::size_t size() const override { return seq_.size(); }
    Frame Load(std::size_t i) const override { return seq_.Load(i); }

private:
    SequenceSource seq_;
};

/// Renders each frame of a synthetic scene when it is requested.
class SceneFrameSource final : public FrameSource {
public:
    explicit SceneFrameSource(synth::SceneSpec spec) : spec_(std::move(spec)) { spec_.validate(); }
    std::size_t size() const override { return spec_.num_frames; }
    Frame Load(std::size_t i) const override { return synth::GenerateFrame(spec_, i); }

private:
    synth::SceneSpec spec_;
};

using SubmapPtr = std::shared_ptr<const Submap>;

/// Append-only submap sequence shared by the two pipeline stages. Readers take
/// prefix snapshots; the writer stalls once it runs `max_backlog` submaps ahead
/// of the reader's acknowledged position.
class SubmapBuffer {
public:
    explicit SubmapBuffer(std::size_t max_backlog) : max_backlog_(max_backlog) {}

    /// Blocks while the backlog is full. Returns false once aborted.
    bool Append(SubmapPtr submap);
    /// No more appends will follow.
    void Close();
    /// Wakes every waiter; later calls fail fast.
    void Abort();
    /// Blocks until `n` submaps exist or the buffer is closed, then returns the
    /// first min(n, size) of them. Empty after Abort.
    std::vector<SubmapPtr> WaitForPrefix(std::size_t n);
    /// Reader has finished with the first `n` submaps.
    void Acknowledge(std::size_t n);
    std::vector<SubmapPtr> Snapshot() const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::condition_variable changed_;
    std::vector<SubmapPtr> items_;
    std::size_t acknowledged_ = 0;
    std::size_t max_backlog_;
    bool closed_ = false;
    bool aborted_ = false;
};

struct PipelineStats {
    std::size_t frames = 0;   // frames that entered a complete window
    std::size_t submaps = 0;
    double frontend_seconds = 0.0;  // busy time of the front-end stage
    double backend_seconds = 0.0;   // busy time of the back-end stage
    double wall_seconds = 0.0;
    double frontend_fps() const { return frontend_seconds > 0 ? frames / frontend_seconds : 0.0; }
    double backend_submaps_per_s() const { return backend_seconds > 0 ? submaps / backend_seconds : 0.0; }
    std::string ToKeyValue() const;
};

struct PipelineResult {
    GlobalMap map;
    std::optional<EvalReport> report;  // present when every frame carries labels
    PipelineStats stats;
};

struct PipelineHooks {
    std::function<void(const Submap &)> on_submap;       // front-end thread
    std::function<void(const LocalMap &)> on_local_map;  // back-end thread
};

/// Runs the front-end and back-end as two concurrent stages. Frames after the
/// last complete window are ignored. Throws ConfigError before any processing
/// and DataError for unusable input.
PipelineResult RunPipeline(const FrameSource &source, const RunConfig &cfg, const PipelineHooks &hooks = {});

}  // namespace staticmap
