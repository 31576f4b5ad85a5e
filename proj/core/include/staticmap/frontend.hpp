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

#include <cstdint>
#include <span>

#include "staticmap/range_image.hpp"
#include "staticmap/types.hpp"

namespace staticmap {

struct FrontendConfig {
    std::size_t window_n = 10;
    double range_diff_threshold = 0.4;  // meters
    // A point is compared with the closest scan return up to this many rows
    // above or below its pixel, absorbing elevation quantization on grazing
    // surfaces such as the ground. 0 compares against the pixel alone.
    int scan_row_window = 0;
    int revert_k = 20;
    double revert_search_radius = 0.5;  // meters
    double revert_dist_eps = 0.05;      // meters
    double revert_angle_eps_deg = 10.0;
    bool revert_enabled = true;
    // Individual halves of the distribution-change test, for ablations.
    bool revert_use_distance = true;
    bool revert_use_angle = true;
    ProjectionConfig projection = ProjectionConfig::Synthetic();

    void validate() const;
};

/// Union of the window's clouds in the world frame, every point RawStatic.
/// Throws std::invalid_argument unless exactly `cfg.window_n` frames are given.
Submap AssembleSubmap(std::span<const Frame> frames, const FrontendConfig &cfg, std::uint32_t id);

/// Flags a submap point Dynamic when some frame of the window observes a return
/// farther than the point along the same pixel, by more than the range threshold.
/// Pixels without a return in the scan carry no evidence.
Submap VisibilityRemoval(Submap submap, std::span<const Frame> frames, const FrontendConfig &cfg);

/// Re-labels Dynamic points Reverted when adding them to their RawStatic
/// neighbourhood leaves the local PCA plane unchanged.
Submap MapBasedRevert(Submap submap, const FrontendConfig &cfg);

struct RevertDecision {
    bool eligible = false;  // enough non-degenerate static support
    double plane_distance = 0.0;
    double normal_angle_deg = 0.0;
};

/// The per-point test behind MapBasedRevert, exposed for inspection.
RevertDecision EvaluateRevert(std::span<const Point3> neighbourhood, const Point3 &candidate);

/// Assemble, remove, and (when enabled) revert.
Submap RunFrontend(std::span<const Frame> frames, const FrontendConfig &cfg, std::uint32_t id);

}  // namespace staticmap
