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
#include "staticmap/evaluation.hpp"

#include <sstream>
#include <stdexcept>

namespace staticmap {

void GroundTruthVoxels::Add(std::span<const Point3> points, std::span<const Label> labels) {
    if (points.size() != labels.size()) {
        throw std::invalid_argument("ground truth: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(points.size()) + " points");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const VoxelIndex v = VoxelIndexOf(points[i], voxel_size);
        switch (labels[i]) {
            case Label::Static: static_voxels.insert(v); break;
            case Label::Dynamic: dynamic_voxels.insert(v); break;
            default: throw std::invalid_argument("ground truth: unlabeled point " + std::to_string(i));
        }
    }
}

GroundTruthVoxels VoxelizeGroundTruth(std::span<const Point3> points, std::span<const Label> labels,
                                      double voxel_size) {
    GroundTruthVoxels gt;
    gt.voxel_size = voxel_size;
    gt.Add(points, labels);
    return gt;
}

double F1FromRates(double pr, double rr) {
    if (pr + rr <= 0.0) return 0.0;
    return 2.0 * (pr * rr) / (pr + rr) / 100.0;
}

EvalReport Score(std::span<const Point3> static_map, const GroundTruthVoxels &gt, double voxel_size) {
    if (voxel_size != gt.voxel_size) throw std::invalid_argument("Score: voxel size differs from ground truth");
    VoxelSet occupied;
    occupied.reserve(static_map.size());
    for (const auto &p : static_map) occupied.insert(VoxelIndexOf(p, voxel_size));

    EvalReport report;
    report.gt_static = gt.static_voxels.size();
    report.gt_dynamic = gt.dynamic_voxels.size();
    for (const auto &v : occupied) {
        if (gt.static_voxels.contains(v)) ++report.preserved_static;
        if (gt.dynamic_voxels.contains(v)) ++report.preserved_dynamic;
    }
    if (report.gt_static > 0) {
        report.pr = 100.0 * static_cast<double>(report.preserved_static) / static_cast<double>(report.gt_static);
    }
    if (report.gt_dynamic > 0) {
        report.rr = 100.0 * (1.0 - static_cast<double>(report.preserved_dynamic) /
                                       static_cast<double>(report.gt_dynamic));
    }
    if (report.pr && report.rr) report.f1 = F1FromRates(*report.pr, *report.rr);
    return report;
}

namespace {
std::string Fmt(const std::optional<double> &v) {
    if (!v) return "nan";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << *v;
    return os.str();
}
}  // namespace

std::string EvalReport::ToKeyValue() const {
    std::ostringstream os;
    os << "pr=" << Fmt(pr) << '\n'
       << "rr=" << Fmt(rr) << '\n';
    os.setf(std::ios::fixed);
    os.precision(4);
    os << "f1=" << f1 << '\n'
       << "gt_static_voxels=" << gt_static << '\n'
       << "gt_dynamic_voxels=" << gt_dynamic << '\n'
       << "preserved_static_voxels=" << preserved_static << '\n'
       << "preserved_dynamic_voxels=" << preserved_dynamic << '\n';
    return os.str();
}

std::string EvalReport::CsvHeader() {
    return "scene,pr,rr,f1,gt_static,gt_dynamic,preserved_static,preserved_dynamic";
}

std::string EvalReport::ToCsvRow(const std::string &scene) const {
    std::ostringstream os;
    os << scene << ',' << Fmt(pr) << ',' << Fmt(rr) << ',';
    os.setf(std::ios::fixed);
    os.precision(4);
    os << f1 << ',' << gt_static << ',' << gt_dynamic << ',' << preserved_static << ','
       << preserved_dynamic;
    return os.str();
}

}  // namespace staticmap
