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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "staticmap/backend.hpp"
#include "staticmap/frontend.hpp"

namespace staticmap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PipelineMode { Full, FrontendOnly, BackendOnly, NonVisibilityCheck, NonIncidentCorrection };

PipelineMode ParsePipelineMode(const std::string &name);
std::string ToString(PipelineMode mode);

/// Everything a pipeline run needs. Keys mirror the `key = value` file format.
struct RunConfig {
    FrontendConfig frontend;
    BackendConfig backend;

    // Back-end projection; unset fields follow the sensor projection widened
    // vertically by `backend_fov_margin` degrees on each side at the sensor's
    // row pitch.
    double backend_fov_margin = 10.0;
    std::optional<int> backend_width;
    std::optional<int> backend_height;
    std::optional<double> backend_fov_up;
    std::optional<double> backend_fov_down;

    int num_cells = 64;
    double max_depth = 50.0;
    double first_cell_depth = 0.5;

    PipelineMode mode = PipelineMode::Full;
    int jobs = 0;                  // 0: all hardware threads
    std::size_t query_lag = 5;     // submaps past the query the back-end waits for
    std::size_t max_backlog = 8;   // front-end stalls beyond this many unqueried submaps

    /// Throws ConfigError.
    void validate() const;
    /// Front-end settings after the mode is applied.
    FrontendConfig EffectiveFrontend() const;
    /// Back-end settings after projection, depth bins and mode are applied.
    BackendConfig EffectiveBackend() const;
    bool runs_removal() const { return mode != PipelineMode::BackendOnly; }
    bool runs_backend() const { return mode != PipelineMode::FrontendOnly; }
};

/// Sets one key; throws ConfigError for unknown keys or malformed values.
void ApplyOverride(RunConfig &cfg, const std::string &key, const std::string &value);
std::vector<std::string> ConfigKeys();
/// Parses `key = value` lines; `#` starts a comment.
RunConfig ParseConfig(const std::string &text, RunConfig base = {});
RunConfig LoadConfig(const std::filesystem::path &path, RunConfig base = {});
std::string SerializeConfig(const RunConfig &cfg);

}  // namespace staticmap
