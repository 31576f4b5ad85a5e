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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "staticmap/types.hpp"

namespace staticmap {

/// Malformed or unreadable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// KITTI velodyne scans: little-endian float32 (x, y, z, intensity) records.
PointCloud ReadScan(const std::filesystem::path &path);
void WriteScan(const std::filesystem::path &path, std::span<const Point3> cloud);

/// SemanticKITTI labels: uint32 per point, lower 16 bits the class id.
/// Classes 252-259 (moving-*) are dynamic.
std::vector<Label> ReadLabels(const std::filesystem::path &path,
                              std::optional<std::size_t> expected_count = std::nullopt);
void WriteLabels(const std::filesystem::path &path, std::span<const Label> labels);
Label LabelFromSemanticId(std::uint32_t word);

/// The `Tr:` entry of a KITTI calib.txt (camera-to-LiDAR extrinsics).
PoseSE3 ReadCalibration(const std::filesystem::path &calib_path);

/// Camera-frame poses converted to the LiDAR frame: Tr^-1 * T_cam * Tr.
std::vector<PoseSE3> ReadPoses(const std::filesystem::path &poses_path,
                               const std::filesystem::path &calib_path);
/// Rows of 12 reals read without conversion.
std::vector<PoseSE3> ReadPoseRows(const std::filesystem::path &poses_path);
void WritePoses(const std::filesystem::path &path, std::span<const PoseSE3> poses);

/// A SemanticKITTI style sequence directory.
///
///   <root>/velodyne/%06d.bin   <root>/labels/%06d.label (optional)
///   <root>/poses.txt           <root>/calib.txt
class SequenceSource {
public:
    struct Record {
        std::filesystem::path scan;
        std::optional<std::filesystem::path> labels;
        PoseSE3 pose;
    };

    /// `first` and `count` select a subsequence; count 0 means "to the end".
    static SequenceSource Open(const std::filesystem::path &root, std::size_t first = 0,
                               std::size_t count = 0);

    std::size_t size() const { return records_.size(); }
    bool has_labels() const;
    const Record &record(std::size_t i) const { return records_.at(i); }
    Frame Load(std::size_t i) const;

private:
    std::vector<Record> records_;
    std::size_t first_ = 0;
};

std::string FrameFileStem(std::size_t index);

/// Writes frames in the layout SequenceSource reads, with an identity Tr.
void WriteSequence(const std::filesystem::path &root, std::span<const Frame> frames);

enum class CloudFormat { Ply, Pcd };

/// Parses "ply" / "pcd" case-insensitively; throws std::invalid_argument otherwise.
CloudFormat ParseCloudFormat(const std::string &name);
std::optional<CloudFormat> CloudFormatFromPath(const std::filesystem::path &path);

using Rgb = std::array<std::uint8_t, 3>;

/// ASCII PLY or PCD v0.7, coordinates printed with 6 decimals. Colors, when
/// given, must match the cloud size and are written as PLY red/green/blue.
void ExportCloud(std::span<const Point3> cloud, CloudFormat format,
                 const std::filesystem::path &path, std::span<const Rgb> colors = {});

/// Reads ASCII PLY, ASCII PCD, or a KITTI .bin scan chosen by extension.
PointCloud ImportCloud(const std::filesystem::path &path);

}  // namespace staticmap
