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

#include <optional>
#include <span>
#include <string>

#include "staticmap/types.hpp"

namespace staticmap {

/// Voxelized ground truth. A voxel holding both static and dynamic points is a
/// member of both sets.
struct GroundTruthVoxels {
    double voxel_size = 0.2;
    VoxelSet static_voxels;
    VoxelSet dynamic_voxels;

    /// Adds labeled points; throws std::invalid_argument on a size mismatch or
    /// an Unknown label.
    void Add(std::span<const Point3> points, std::span<const Label> labels);
};

GroundTruthVoxels VoxelizeGroundTruth(std::span<const Point3> points, std::span<const Label> labels,
                                      double voxel_size = 0.2);

struct EvalReport {
    std::optional<double> pr;  // percent; undefined without static ground truth
    std::optional<double> rr;  // percent; undefined without dynamic ground truth
    double f1 = 0.0;
    std::size_t gt_static = 0;
    std::size_t gt_dynamic = 0;
    std::size_t preserved_static = 0;
    std::size_t preserved_dynamic = 0;

    /// `key=value` lines; undefined metrics print as `nan`.
    std::string ToKeyValue() const;
    static std::string CsvHeader();
    std::string ToCsvRow(const std::string &scene) const;
};

/// F1 from percentages: 2 * pr * rr / (pr + rr) / 100, or 0 when pr + rr == 0.
double F1FromRates(double pr, double rr);

/// Voxel-wise preservation and rejection rates of `static_map` against `gt`.
/// Throws std::invalid_argument when voxel sizes differ.
EvalReport Score(std::span<const Point3> static_map, const GroundTruthVoxels &gt, double voxel_size);

}  // namespace staticmap
