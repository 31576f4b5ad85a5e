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
#include "staticmap/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace staticmap {

namespace fs = std::filesystem;
static_assert(std::endian::native == std::endian::little, "binary KITTI readers assume little endian");

namespace {

std::vector<char> ReadBytes(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    std::vector<char> bytes(size);
    if (size > 0 && !in.read(bytes.data(), static_cast<std::streamsize>(size))) {
        throw DataError("failed reading " + path.string());
    }
    return bytes;
}

std::ofstream OpenForWrite(const fs::path &path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::vector<double> ParseReals(const std::string &line, const fs::path &path, std::size_t line_no) {
    std::vector<double> values;
    const char *p = line.data();
    const char *end = p + line.size();
    while (p < end) {
        while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
        if (p >= end) break;
        double v = 0.0;
        const auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || (next < end && !std::isspace(static_cast<unsigned char>(*next)))) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
        }
        values.push_back(v);
        p = next;
    }
    return values;
}

PoseSE3 PoseFromRow(const std::vector<double> &v, const fs::path &path, std::size_t line_no) {
    if (v.size() != 12) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 12 values, got " +
                        std::to_string(v.size()));
    }
    Eigen::Matrix3d r;
    r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    try {
        return PoseSE3::FromApproximate(r, Eigen::Vector3d(v[3], v[7], v[11]));
    } catch (const std::invalid_argument &e) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
}

void AppendFixed(std::string &out, double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    if (ec != std::errc()) throw DataError("cannot format coordinate");
    out.append(buf, end);
}

std::string Lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

PointCloud ReadScan(const fs::path &path) {
    const auto bytes = ReadBytes(path);
    if (bytes.size() % 16 != 0) {
        throw DataError(path.string() + ": size " + std::to_string(bytes.size()) +
                        " is not a multiple of 16 bytes");
    }
    PointCloud cloud(bytes.size() / 16);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        float xyz[3];
        std::memcpy(xyz, bytes.data() + 16 * i, sizeof(xyz));
        cloud[i] = Point3(xyz[0], xyz[1], xyz[2]);
    }
    return cloud;
}

void WriteScan(const fs::path &path, std::span<const Point3> cloud) {
    std::vector<float> data;
    data.reserve(cloud.size() * 4);
    for (const auto &p : cloud) {
        data.push_back(static_cast<float>(p.x()));
        data.push_back(static_cast<float>(p.y()));
        data.push_back(static_cast<float>(p.z()));
        data.push_back(0.0F);
    }
    auto out = OpenForWrite(path, std::ios::binary);
    out.write(reinterpret_cast<const char *>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!out) throw DataError("failed writing " + path.string());
}

Label LabelFromSemanticId(std::uint32_t word) {
    const std::uint32_t semantic = word & 0xFFFFU;
    return semantic >= 252 && semantic <= 259 ? Label::Dynamic : Label::Static;
}

std::vector<Label> ReadLabels(const fs::path &path, std::optional<std::size_t> expected_count) {
    const auto bytes = ReadBytes(path);
    if (bytes.size() % 4 != 0) throw DataError(path.string() + ": size is not a multiple of 4 bytes");
    const std::size_t n = bytes.size() / 4;
    if (expected_count && *expected_count != n) {
        throw DataError(path.string() + ": " + std::to_string(n) + " labels but " +
                        std::to_string(*expected_count) + " points");
    }
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t word = 0;
        std::memcpy(&word, bytes.data() + 4 * i, sizeof(word));
        labels[i] = LabelFromSemanticId(word);
    }
    return labels;
}

void WriteLabels(const fs::path &path, std::span<const Label> labels) {
    std::vector<std::uint32_t> words;
    words.reserve(labels.size());
    for (const auto l : labels) words.push_back(l == Label::Dynamic ? 254U : 9U);
    auto out = OpenForWrite(path, std::ios::binary);
    out.write(reinterpret_cast<const char *>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
    if (!out) throw DataError("failed writing " + path.string());
}

PoseSE3 ReadCalibration(const fs::path &calib_path) {
    std::ifstream in(calib_path);
    if (!in) throw DataError("cannot open " + calib_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("Tr:", 0) == 0) return PoseFromRow(ParseReals(line.substr(3), calib_path, line_no), calib_path, line_no);
    }
    throw DataError(calib_path.string() + ": no 'Tr:' entry");
}

std::vector<PoseSE3> ReadPoseRows(const fs::path &poses_path) {
    std::ifstream in(poses_path);
    if (!in) throw DataError("cannot open " + poses_path.string());
    std::vector<PoseSE3> poses;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        poses.push_back(PoseFromRow(ParseReals(line, poses_path, line_no), poses_path, line_no));
    }
    return poses;
}

std::vector<PoseSE3> ReadPoses(const fs::path &poses_path, const fs::path &calib_path) {
    const PoseSE3 tr = ReadCalibration(calib_path);
    const PoseSE3 tr_inv = tr.inverse();
    std::vector<PoseSE3> poses = ReadPoseRows(poses_path);
    for (auto &p : poses) p = tr_inv * p * tr;
    return poses;
}

void WritePoses(const fs::path &path, std::span<const PoseSE3> poses) {
    auto out = OpenForWrite(path);
    out.precision(17);
    for (const auto &pose : poses) {
        const auto &r = pose.rotation();
        const auto &t = pose.translation();
        for (int row = 0; row < 3; ++row) {
            out << r(row, 0) << ' ' << r(row, 1) << ' ' << r(row, 2) << ' ' << t[row]
                << (row == 2 ? '\n' : ' ');
        }
    }
    if (!out) throw DataError("failed writing " + path.string());
}

std::string FrameFileStem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu", index);
    return buf;
}

SequenceSource SequenceSource::Open(const fs::path &root, std::size_t first, std::size_t count) {
    if (!fs::is_directory(root)) throw DataError("sequence directory not found: " + root.string());
    const auto poses = ReadPoses(root / "poses.txt", root / "calib.txt");
    if (first >= poses.size()) {
        throw DataError(root.string() + ": first frame " + std::to_string(first) + " beyond " +
                        std::to_string(poses.size()) + " poses");
    }
    const std::size_t last = count == 0 ? poses.size() : std::min(poses.size(), first + count);
    SequenceSource source;
    source.first_ = first;
    for (std::size_t i = first; i < last; ++i) {
        Record rec;
        rec.scan = root / "velodyne" / (FrameFileStem(i) + ".bin");
        if (!fs::exists(rec.scan)) throw DataError("missing scan " + rec.scan.string());
        const fs::path label = root / "labels" / (FrameFileStem(i) + ".label");
        if (fs::exists(label)) rec.labels = label;
        rec.pose = poses[i];
        source.records_.push_back(std::move(rec));
    }
    return source;
}

bool SequenceSource::has_labels() const {
    return !records_.empty() &&
           std::all_of(records_.begin(), records_.end(), [](const Record &r) { return r.labels.has_value(); });
}

Frame SequenceSource::Load(std::size_t i) const {
    const Record &rec = records_.at(i);
    Frame frame;
    frame.cloud = ReadScan(rec.scan);
    frame.pose = rec.pose;
    frame.timestamp_index = first_ + i;
    if (rec.labels) frame.gt_labels = ReadLabels(*rec.labels, frame.cloud.size());
    return frame;
}

void WriteSequence(const fs::path &root, std::span<const Frame> frames) {
    std::vector<PoseSE3> poses;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame &f = frames[i];
        WriteScan(root / "velodyne" / (FrameFileStem(i) + ".bin"), f.cloud);
        if (f.gt_labels) WriteLabels(root / "labels" / (FrameFileStem(i) + ".label"), *f.gt_labels);
        poses.push_back(f.pose);
    }
    WritePoses(root / "poses.txt", poses);
    auto calib = OpenForWrite(root / "calib.txt");
    calib << "Tr: 1 0 0 0 0 1 0 0 0 0 1 0\n";
}

CloudFormat ParseCloudFormat(const std::string &name) {
    const std::string n = Lower(name);
    if (n == "ply") return CloudFormat::Ply;
    if (n == "pcd") return CloudFormat::Pcd;
    throw std::invalid_argument("unknown cloud format '" + name + "' (expected ply or pcd)");
}

std::optional<CloudFormat> CloudFormatFromPath(const fs::path &path) {
    const std::string ext = Lower(path.extension().string());
    if (ext == ".ply") return CloudFormat::Ply;
    if (ext == ".pcd") return CloudFormat::Pcd;
    return std::nullopt;
}

void ExportCloud(std::span<const Point3> cloud, CloudFormat format, const fs::path &path,
                 std::span<const Rgb> colors) {
    if (!colors.empty() && colors.size() != cloud.size()) {
        throw std::invalid_argument("ExportCloud: color count differs from point count");
    }
    const bool with_color = !colors.empty() && format == CloudFormat::Ply;
    std::string text;
    text.reserve(cloud.size() * 40 + 256);
    const std::string n = std::to_string(cloud.size());
    if (format == CloudFormat::Ply) {
        text += "ply\nformat ascii 1.0\nelement vertex " + n +
                "\nproperty float x\nproperty float y\nproperty float z\n";
        if (with_color) text += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
        text += "end_header\n";
    } else {
        text += "# .PCD v0.7 - Point Cloud Data file format\nVERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\n"
                "TYPE F F F\nCOUNT 1 1 1\nWIDTH " + n + "\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS " +
                n + "\nDATA ascii\n";
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        AppendFixed(text, cloud[i].x());
        text += ' ';
        AppendFixed(text, cloud[i].y());
        text += ' ';
        AppendFixed(text, cloud[i].z());
        if (with_color) {
            text += ' ' + std::to_string(colors[i][0]) + ' ' + std::to_string(colors[i][1]) + ' ' +
                    std::to_string(colors[i][2]);
        }
        text += '\n';
    }
    auto out = OpenForWrite(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

namespace {

PointCloud ParseBody(std::istream &in, std::size_t count, const fs::path &path, std::size_t line_no) {
    PointCloud cloud;
    cloud.reserve(count);
    std::string line;
    while (cloud.size() < count && std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto v = ParseReals(line, path, line_no);
        if (v.size() < 3) throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected x y z");
        cloud.emplace_back(v[0], v[1], v[2]);
    }
    if (cloud.size() != count) {
        throw DataError(path.string() + ": expected " + std::to_string(count) + " points, found " +
                        std::to_string(cloud.size()));
    }
    return cloud;
}

PointCloud ReadPly(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0, count = 0;
    bool ascii = false;
    std::vector<std::string> props;
    bool in_vertex = false;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw DataError(path.string() + ": not a PLY file");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "format") {
            std::string kind;
            ls >> kind;
            ascii = kind == "ascii";
        } else if (key == "element") {
            std::string name;
            ls >> name;
            in_vertex = name == "vertex";
            if (in_vertex) ls >> count;
        } else if (key == "property" && in_vertex) {
            std::string type, name;
            ls >> type >> name;
            props.push_back(name);
        } else if (key == "end_header") {
            break;
        }
    }
    if (!ascii) throw DataError(path.string() + ": only ASCII PLY is supported");
    if (props.size() < 3 || props[0] != "x" || props[1] != "y" || props[2] != "z") {
        throw DataError(path.string() + ": vertex properties must start with x y z");
    }
    return ParseBody(in, count, path, line_no);
}

PointCloud ReadPcd(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0, count = 0;
    bool have_fields = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "FIELDS") {
            std::string x, y, z;
            ls >> x >> y >> z;
            have_fields = x == "x" && y == "y" && z == "z";
        } else if (key == "POINTS") {
            ls >> count;
        } else if (key == "DATA") {
            std::string kind;
            ls >> kind;
            if (kind != "ascii") throw DataError(path.string() + ": only ASCII PCD is supported");
            break;
        }
    }
    if (!have_fields) throw DataError(path.string() + ": FIELDS must start with x y z");
    return ParseBody(in, count, path, line_no);
}

}  // namespace

PointCloud ImportCloud(const fs::path &path) {
    const std::string ext = Lower(path.extension().string());
    if (ext == ".bin") return ReadScan(path);
    if (ext == ".ply") return ReadPly(path);
    if (ext == ".pcd") return ReadPcd(path);
    throw DataError(path.string() + ": unsupported extension (expected .ply, .pcd or .bin)");
}

}  // namespace staticmap
