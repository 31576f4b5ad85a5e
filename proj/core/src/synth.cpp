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
#include "staticmap/synth.hpp"

#include <tbb/parallel_for.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace staticmap::synth {

namespace {
constexpr double kEps = 1e-9;
}

std::pair<Eigen::Vector3d, double> PathPoint(const std::vector<Eigen::Vector3d> &waypoints, bool loop,
                                             double s) {
    if (waypoints.empty()) throw std::invalid_argument("PathPoint: empty path");
    if (waypoints.size() == 1) return {waypoints.front(), 0.0};
    std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> segments;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) segments.emplace_back(waypoints[i], waypoints[i + 1]);
    if (loop) segments.emplace_back(waypoints.back(), waypoints.front());
    double total = 0.0;
    for (const auto &[a, b] : segments) total += (b - a).norm();
    if (total <= 0.0) return {waypoints.front(), 0.0};

    if (loop) {
        s = std::fmod(s, total);
        if (s < 0.0) s += total;
    } else {
        s = std::clamp(s, 0.0, total);
    }
    for (const auto &[a, b] : segments) {
        const double len = (b - a).norm();
        if (len <= 0.0) continue;
        const double heading = std::atan2(b.y() - a.y(), b.x() - a.x());
        if (s <= len) return {a + (b - a) * (s / len), heading};
        s -= len;
    }
    const auto &[a, b] = segments.back();
    return {b, std::atan2(b.y() - a.y(), b.x() - a.x())};
}

VerticalCylinder Agent::ShapeAt(double t) const {
    std::vector<Eigen::Vector3d> path;
    path.reserve(waypoints.size());
    for (const auto &w : waypoints) path.emplace_back(w.x(), w.y(), 0.0);
    const auto [pos, heading] = PathPoint(path, loop, phase + speed * t);
    (void)heading;
    return {pos.head<2>(), radius, z_base, z_base + height};
}

void SceneSpec::validate() const {
    projection.validate();
    if (num_frames == 0) throw std::invalid_argument("scene: num_frames must be > 0");
    if (!(max_range > 0.0)) throw std::invalid_argument("scene: max_range must be > 0");
    if (range_noise_sigma < 0.0) throw std::invalid_argument("scene: range_noise_sigma must be >= 0");
    if (sensor.waypoints.empty()) throw std::invalid_argument("scene: sensor needs at least one waypoint");
    if (sensor.speed < 0.0) throw std::invalid_argument("scene: sensor speed must be >= 0");
    if (!(sensor.scan_rate_hz > 0.0)) throw std::invalid_argument("scene: scan_rate must be > 0");
    for (const auto &b : boxes) {
        if (!(b.min.array() < b.max.array()).all()) throw std::invalid_argument("scene: box min must be below max");
    }
    for (const auto &c : cylinders) {
        if (!(c.radius > 0.0) || !(c.z_max > c.z_min)) throw std::invalid_argument("scene: bad cylinder");
    }
    for (const auto &a : agents) {
        if (a.speed < 0.0) throw std::invalid_argument("scene: agent speed must be >= 0");
        if (a.waypoints.empty()) throw std::invalid_argument("scene: agent needs waypoints");
        if (!(a.radius > 0.0) || !(a.height > 0.0)) throw std::invalid_argument("scene: bad agent shape");
    }
}

PoseSE3 SceneSpec::SensorPose(std::size_t frame) const {
    const auto [pos, heading] = PathPoint(sensor.waypoints, false, sensor.speed * FrameTime(frame));
    return PoseSE3::FromYaw(heading, pos);
}

namespace {

std::optional<double> IntersectBox(const Box &box, const Eigen::Vector3d &o, const Eigen::Vector3d &d) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (std::abs(d[a]) < 1e-15) {
            if (o[a] < box.min[a] || o[a] > box.max[a]) return std::nullopt;
            continue;
        }
        double ta = (box.min[a] - o[a]) / d[a];
        double tb = (box.max[a] - o[a]) / d[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (t0 > t1 || t0 <= kEps) return std::nullopt;  // miss, or origin inside
    return t0;
}

std::optional<double> IntersectCylinder(const VerticalCylinder &c, const Eigen::Vector3d &o,
                                        const Eigen::Vector3d &d) {
    const double ox = o.x() - c.center.x(), oy = o.y() - c.center.y();
    if (ox * ox + oy * oy <= c.radius * c.radius && o.z() >= c.z_min && o.z() <= c.z_max) return std::nullopt;
    std::optional<double> best;
    const auto consider = [&](double t) {
        if (t > kEps && (!best || t < *best)) best = t;
    };
    const double a = d.x() * d.x() + d.y() * d.y();
    if (a > 1e-15) {
        const double b = 2.0 * (ox * d.x() + oy * d.y());
        const double cc = ox * ox + oy * oy - c.radius * c.radius;
        const double disc = b * b - 4.0 * a * cc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
                const double z = o.z() + t * d.z();
                if (z >= c.z_min && z <= c.z_max) {
                    consider(t);
                    break;
                }
            }
        }
    }
    if (std::abs(d.z()) > 1e-15) {
        for (const double zc : {c.z_min, c.z_max}) {
            const double t = (zc - o.z()) / d.z();
            const double x = ox + t * d.x(), y = oy + t * d.y();
            if (x * x + y * y <= c.radius * c.radius) consider(t);
        }
    }
    return best;
}

}  // namespace

std::optional<RayHit> CastRay(const SceneSpec &spec, const Eigen::Vector3d &origin,
                              const Eigen::Vector3d &direction, double t) {
    std::optional<RayHit> best;
    const auto consider = [&](std::optional<double> range, bool dynamic) {
        if (range && *range <= spec.max_range && (!best || *range < best->range)) best = RayHit{*range, dynamic};
    };
    if (spec.ground_z && std::abs(direction.z()) > 1e-15) {
        const double range = (*spec.ground_z - origin.z()) / direction.z();
        if (range > kEps) consider(range, false);
    }
    for (const auto &b : spec.boxes) consider(IntersectBox(b, origin, direction), false);
    for (const auto &c : spec.cylinders) consider(IntersectCylinder(c, origin, direction), false);
    for (const auto &a : spec.agents) consider(IntersectCylinder(a.ShapeAt(t), origin, direction), true);
    return best;
}

Frame GenerateFrame(const SceneSpec &spec, std::size_t index) {
    Frame frame;
    frame.timestamp_index = index;
    frame.pose = spec.SensorPose(index);
    const double t = spec.FrameTime(index);

    // Agents are frozen for the duration of one scan.
    SceneSpec frozen = spec;
    frozen.agents.clear();
    std::vector<VerticalCylinder> agent_shapes;
    for (const auto &a : spec.agents) agent_shapes.push_back(a.ShapeAt(t));

    std::mt19937_64 rng(spec.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    std::normal_distribution<double> noise(0.0, spec.range_noise_sigma > 0.0 ? spec.range_noise_sigma : 1.0);

    const auto &cfg = spec.projection;
    const Eigen::Vector3d origin = frame.pose.translation();
    std::vector<Label> labels;
    for (int row = 0; row < cfg.height; ++row) {
        for (int col = 0; col < cfg.width; ++col) {
            const Eigen::Vector3d local = PixelDirection(row, col, cfg);
            const Eigen::Vector3d dir = frame.pose.rotation() * local;
            auto hit = CastRay(frozen, origin, dir, t);
            for (const auto &shape : agent_shapes) {
                const auto r = IntersectCylinder(shape, origin, dir);
                if (r && *r <= spec.max_range && (!hit || *r < hit->range)) hit = RayHit{*r, true};
            }
            if (!hit) continue;
            double range = hit->range;
            if (spec.range_noise_sigma > 0.0) range += noise(rng);
            if (!(range > 0.0)) continue;
            frame.cloud.push_back(local * range);
            labels.push_back(hit->dynamic ? Label::Dynamic : Label::Static);
        }
    }
    frame.gt_labels = std::move(labels);
    return frame;
}

std::vector<Frame> GenerateSequence(const SceneSpec &spec) {
    spec.validate();
    std::vector<Frame> frames(spec.num_frames);
    tbb::parallel_for(std::size_t{0}, spec.num_frames, [&](std::size_t i) { frames[i] = GenerateFrame(spec, i); });
    return frames;
}

// ---------------------------------------------------------------------------
// Scene files

namespace {

std::string Trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> Numbers(const std::string &value, const std::string &key) {
    std::istringstream in(value);
    std::vector<double> out;
    double v = 0.0;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw std::invalid_argument("scene: malformed numbers for '" + key + "'");
    return out;
}

double Number(const std::string &value, const std::string &key) {
    const auto v = Numbers(value, key);
    if (v.size() != 1) throw std::invalid_argument("scene: '" + key + "' expects one number");
    return v[0];
}

template <int N>
Eigen::Matrix<double, N, 1> Vec(const std::string &value, const std::string &key) {
    const auto v = Numbers(value, key);
    if (v.size() != N) throw std::invalid_argument("scene: '" + key + "' expects " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) out[i] = v[i];
    return out;
}

template <int N>
std::vector<Eigen::Matrix<double, N, 1>> VecList(const std::string &value, const std::string &key) {
    std::vector<Eigen::Matrix<double, N, 1>> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (!Trim(item).empty()) out.push_back(Vec<N>(item, key));
    }
    return out;
}

bool Bool(const std::string &value, const std::string &key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("scene: '" + key + "' expects true or false");
}

}  // namespace

SceneSpec ParseScene(const std::string &text) {
    SceneSpec spec;
    spec.sensor.waypoints.clear();
    enum class Block { Header, Box, Cylinder, Agent } block = Block::Header;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    try {
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = Trim(line);
            if (line.empty()) continue;
            if (line == "[box]") {
                block = Block::Box;
                spec.boxes.push_back({Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones()});
                continue;
            }
            if (line == "[cylinder]") {
                block = Block::Cylinder;
                spec.cylinders.push_back({Eigen::Vector2d::Zero()});
                continue;
            }
            if (line == "[agent]") {
                block = Block::Agent;
                spec.agents.emplace_back();
                continue;
            }
            if (line.front() == '[') throw std::invalid_argument("unknown block " + line);
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("expected key = value");
            const std::string key = Trim(line.substr(0, eq));
            const std::string value = Trim(line.substr(eq + 1));

            switch (block) {
                case Block::Header: {
                    static const std::map<std::string, std::function<void(SceneSpec &, const std::string &, const std::string &)>>
                        setters = {
                            {"seed", [](SceneSpec &s, auto &v, auto &) { s.seed = std::stoull(v); }},
                            {"num_frames", [](SceneSpec &s, auto &v, auto &k) { s.num_frames = static_cast<std::size_t>(Number(v, k)); }},
                            {"width", [](SceneSpec &s, auto &v, auto &k) { s.projection.width = static_cast<int>(Number(v, k)); }},
                            {"height", [](SceneSpec &s, auto &v, auto &k) { s.projection.height = static_cast<int>(Number(v, k)); }},
                            {"fov_up", [](SceneSpec &s, auto &v, auto &k) { s.projection.fov_up_deg = Number(v, k); }},
                            {"fov_down", [](SceneSpec &s, auto &v, auto &k) { s.projection.fov_down_deg = Number(v, k); }},
                            {"max_range", [](SceneSpec &s, auto &v, auto &k) { s.max_range = Number(v, k); }},
                            {"range_noise_sigma", [](SceneSpec &s, auto &v, auto &k) { s.range_noise_sigma = Number(v, k); }},
                            {"ground_z", [](SceneSpec &s, auto &v, auto &k) { s.ground_z = Number(v, k); }},
                            {"sensor_speed", [](SceneSpec &s, auto &v, auto &k) { s.sensor.speed = Number(v, k); }},
                            {"scan_rate", [](SceneSpec &s, auto &v, auto &k) { s.sensor.scan_rate_hz = Number(v, k); }},
                            {"sensor_waypoints", [](SceneSpec &s, auto &v, auto &k) { s.sensor.waypoints = VecList<3>(v, k); }},
                        };
                    const auto it = setters.find(key);
                    if (it == setters.end()) throw std::invalid_argument("unknown key '" + key + "'");
                    it->second(spec, value, key);
                    break;
                }
                case Block::Box: {
                    auto &b = spec.boxes.back();
                    if (key == "min") b.min = Vec<3>(value, key);
                    else if (key == "max") b.max = Vec<3>(value, key);
                    else throw std::invalid_argument("unknown box key '" + key + "'");
                    break;
                }
                case Block::Cylinder: {
                    auto &c = spec.cylinders.back();
                    if (key == "center") c.center = Vec<2>(value, key);
                    else if (key == "radius") c.radius = Number(value, key);
                    else if (key == "z_min") c.z_min = Number(value, key);
                    else if (key == "z_max") c.z_max = Number(value, key);
                    else throw std::invalid_argument("unknown cylinder key '" + key + "'");
                    break;
                }
                case Block::Agent: {
                    auto &a = spec.agents.back();
                    if (key == "radius") a.radius = Number(value, key);
                    else if (key == "height") a.height = Number(value, key);
                    else if (key == "z_base") a.z_base = Number(value, key);
                    else if (key == "speed") a.speed = Number(value, key);
                    else if (key == "phase") a.phase = Number(value, key);
                    else if (key == "loop") a.loop = Bool(value, key);
                    else if (key == "waypoints") a.waypoints = VecList<2>(value, key);
                    else throw std::invalid_argument("unknown agent key '" + key + "'");
                    break;
                }
            }
        }
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument("scene line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::out_of_range &e) {
        throw std::invalid_argument("scene line " + std::to_string(line_no) + ": value out of range");
    }
    spec.validate();
    return spec;
}

SceneSpec LoadScene(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scene file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ParseScene(ss.str());
}

std::string SerializeScene(const SceneSpec &spec) {
    std::ostringstream os;
    os.precision(17);
    const auto vec = [&](const auto &v) {
        for (int i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    };
    os << "seed = " << spec.seed << '\n'
       << "num_frames = " << spec.num_frames << '\n'
       << "width = " << spec.projection.width << '\n'
       << "height = " << spec.projection.height << '\n'
       << "fov_up = " << spec.projection.fov_up_deg << '\n'
       << "fov_down = " << spec.projection.fov_down_deg << '\n'
       << "max_range = " << spec.max_range << '\n'
       << "range_noise_sigma = " << spec.range_noise_sigma << '\n';
    if (spec.ground_z) os << "ground_z = " << *spec.ground_z << '\n';
    os << "sensor_speed = " << spec.sensor.speed << '\n'
       << "scan_rate = " << spec.sensor.scan_rate_hz << '\n'
       << "sensor_waypoints = ";
    for (std::size_t i = 0; i < spec.sensor.waypoints.size(); ++i) {
        if (i) os << "; ";
        vec(spec.sensor.waypoints[i]);
    }
    os << '\n';
    for (const auto &b : spec.boxes) {
        os << "\n[box]\nmin = ";
        vec(b.min);
        os << "\nmax = ";
        vec(b.max);
        os << '\n';
    }
    for (const auto &c : spec.cylinders) {
        os << "\n[cylinder]\ncenter = ";
        vec(c.center);
        os << "\nradius = " << c.radius << "\nz_min = " << c.z_min << "\nz_max = " << c.z_max << '\n';
    }
    for (const auto &a : spec.agents) {
        os << "\n[agent]\nradius = " << a.radius << "\nheight = " << a.height << "\nz_base = " << a.z_base
           << "\nspeed = " << a.speed << "\nphase = " << a.phase << "\nloop = " << (a.loop ? "true" : "false")
           << "\nwaypoints = ";
        for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
            if (i) os << "; ";
            vec(a.waypoints[i]);
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Presets

namespace {

// Surfaces sit just past a 0.2 m voxel boundary as seen from inside the scene,
// so rays reach them without skimming through their voxel layer.
constexpr double kSkin = 0.002;
constexpr double kGroundZ = -kSkin;
constexpr double kSensorZ = 1.0;

// Walls enclosing [x0, x1] x [y0, y1].
void AddWalls(SceneSpec &spec, double x0, double y0, double x1, double y1, double height) {
    const double t = 0.2;
    x0 -= kSkin, y0 -= kSkin, x1 += kSkin, y1 += kSkin;
    spec.boxes.push_back({{x0 - t, y0 - t, kGroundZ}, {x1 + t, y0, height}});
    spec.boxes.push_back({{x0 - t, y1, kGroundZ}, {x1 + t, y1 + t, height}});
    spec.boxes.push_back({{x0 - t, y0, kGroundZ}, {x0, y1, height}});
    spec.boxes.push_back({{x1, y0, kGroundZ}, {x1 + t, y1, height}});
}

Agent RandomAgent(std::mt19937_64 &rng, double x_lo, double x_hi, double y_lo, double y_hi) {
    std::uniform_real_distribution<double> ux(x_lo, x_hi), uy(y_lo, y_hi), speed(1.0, 1.6), side(0.0, 1.0);
    Agent a;
    // Feet within the revert tolerance of the ground plane would read as ground.
    a.z_base = 0.1;
    a.speed = speed(rng);
    const double sign = side(rng) < 0.5 ? -1.0 : 1.0;
    double xa = ux(rng), xb = ux(rng);
    if (std::abs(xb - xa) < 10.0) xb = xa < 0.5 * (x_lo + x_hi) ? xa + 10.0 : xa - 10.0;
    a.waypoints = {{xa, sign * uy(rng)}, {xb, sign * uy(rng)}};
    const double length = 2.0 * (a.waypoints[1] - a.waypoints[0]).norm();
    a.phase = side(rng) * length;
    return a;
}

}  // namespace

SceneSpec CrowdCorridor(std::uint64_t seed, std::size_t num_agents, std::size_t num_frames) {
    SceneSpec spec;
    spec.seed = seed;
    spec.num_frames = num_frames;
    spec.ground_z = kGroundZ;
    AddWalls(spec, 0.0, -5.0, 70.0, 5.0, 3.5);
    for (double x = 10.0; x < 65.0; x += 12.5) {
        spec.cylinders.push_back({{x, 4.3}, 0.3, kGroundZ, 3.5});
        spec.cylinders.push_back({{x + 6.0, -4.3}, 0.3, kGroundZ, 3.5});
    }
    spec.boxes.push_back({{15.0, -4.9, kGroundZ}, {17.0, -4.3, 0.5}});
    spec.boxes.push_back({{42.0, 4.2, kGroundZ}, {44.0, 4.9, 0.8}});

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < num_agents; ++i) spec.agents.push_back(RandomAgent(rng, 4.0, 66.0, 1.0, 3.8));
    spec.sensor.waypoints = {{8.0, 0.0, kSensorZ}, {62.0, 0.0, kSensorZ}};
    spec.sensor.speed = 2.5;
    spec.sensor.scan_rate_hz = 10.0;
    return spec;
}

SceneSpec StaticCorridor(std::uint64_t seed, std::size_t num_frames) {
    SceneSpec spec = CrowdCorridor(seed, 0, num_frames);
    return spec;
}

SceneSpec OpenSquare(std::uint64_t seed, std::size_t num_agents, std::size_t num_frames) {
    SceneSpec spec;
    spec.seed = seed;
    spec.num_frames = num_frames;
    spec.ground_z = kGroundZ;
    AddWalls(spec, 0.0, 0.0, 40.0, 40.0, 3.0);
    for (double x : {12.0, 20.0, 28.0}) {
        for (double y : {12.0, 20.0, 28.0}) {
            if (x == 20.0 && y == 20.0) continue;
            spec.cylinders.push_back({{x, y}, 0.5, kGroundZ, 4.0});
        }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < num_agents; ++i) {
        Agent a = RandomAgent(rng, 6.0, 34.0, 3.0, 8.0);
        for (auto &w : a.waypoints) w.y() += 20.0;
        spec.agents.push_back(a);
    }
    spec.sensor.waypoints = {{8.0, 20.0, kSensorZ}, {32.0, 20.0, kSensorZ}};
    spec.sensor.speed = 1.0;
    return spec;
}

SceneSpec FlatGround(std::uint64_t seed, std::size_t num_agents, std::size_t num_frames) {
    SceneSpec spec;
    spec.seed = seed;
    spec.num_frames = num_frames;
    spec.ground_z = kGroundZ;
    // A tall enclosure gives every upward ray a backdrop.
    AddWalls(spec, -12.0, -12.0, 15.0, 12.0, 7.0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < num_agents; ++i) spec.agents.push_back(RandomAgent(rng, -10.0, 13.0, 2.0, 8.0));
    spec.sensor.waypoints = {{0.0, 0.0, kSensorZ}, {10.0, 0.0, kSensorZ}};
    spec.sensor.speed = 0.5;
    return spec;
}

SceneSpec PresetScene(const std::string &name, std::uint64_t seed) {
    if (name == "crowd") return CrowdCorridor(seed);
    if (name == "corridor") return StaticCorridor(seed);
    if (name == "square") return OpenSquare(seed);
    if (name == "flat") return FlatGround(seed);
    throw std::invalid_argument("unknown preset scene '" + name + "' (crowd, corridor, square, flat)");
}

}  // namespace staticmap::synth
