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
#include "staticmap/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace staticmap {

PipelineMode ParsePipelineMode(const std::string &name) {
    if (name == "full") return PipelineMode::Full;
    if (name == "frontend-only") return PipelineMode::FrontendOnly;
    if (name == "backend-only") return PipelineMode::BackendOnly;
    if (name == "non-visibility-check") return PipelineMode::NonVisibilityCheck;
    if (name == "non-incident-correction") return PipelineMode::NonIncidentCorrection;
    throw ConfigError("unknown mode '" + name +
                      "' (full, frontend-only, backend-only, non-visibility-check, non-incident-correction)");
}

std::string ToString(PipelineMode mode) {
    switch (mode) {
        case PipelineMode::Full: return "full";
        case PipelineMode::FrontendOnly: return "frontend-only";
        case PipelineMode::BackendOnly: return "backend-only";
        case PipelineMode::NonVisibilityCheck: return "non-visibility-check";
        case PipelineMode::NonIncidentCorrection: return "non-incident-correction";
    }
    return "full";
}

FrontendConfig RunConfig::EffectiveFrontend() const { return frontend; }

BackendConfig RunConfig::EffectiveBackend() const {
    BackendConfig b = backend;
    const ProjectionConfig &sensor = frontend.projection;
    b.projection = sensor;
    b.projection.fov_up_deg = backend_fov_up.value_or(std::min(90.0, sensor.fov_up_deg + backend_fov_margin));
    b.projection.fov_down_deg = backend_fov_down.value_or(std::max(-90.0, sensor.fov_down_deg - backend_fov_margin));
    const double pitch = sensor.vertical_fov_deg() / sensor.height;
    b.projection.height = backend_height.value_or(
        std::max(1, static_cast<int>(std::lround(b.projection.vertical_fov_deg() / pitch))));
    if (backend_width) b.projection.width = *backend_width;
    b.depth = DepthDiscretization::Geometric(num_cells, max_depth, first_cell_depth);
    if (mode == PipelineMode::NonVisibilityCheck) b.visibility_check = false;
    if (mode == PipelineMode::NonIncidentCorrection) b.incident_correction = false;
    return b;
}

void RunConfig::validate() const {
    try {
        EffectiveFrontend().validate();
        EffectiveBackend().validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (backend_fov_margin < 0.0) throw ConfigError("backend_fov_margin must be >= 0");
    if (jobs < 0) throw ConfigError("jobs must be >= 0");
    if (max_backlog <= query_lag) throw ConfigError("max_backlog must exceed query_lag");
}

namespace {

double ParseDouble(const std::string &key, const std::string &value) {
    double out = 0.0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    return out;
}

long long ParseInt(const std::string &key, const std::string &value) {
    long long out = 0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    return out;
}

std::size_t ParseCount(const std::string &key, const std::string &value) {
    const long long v = ParseInt(key, value);
    if (v < 0) throw ConfigError("'" + key + "' must be >= 0");
    return static_cast<std::size_t>(v);
}

bool ParseBool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;
using Getter = std::function<std::string(const RunConfig &)>;

struct Entry {
    Setter set;
    Getter get;
};

std::string Num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <typename T>
std::string Opt(const std::optional<T> &v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) return Num(*v);
    else return std::to_string(*v);
}

const std::map<std::string, Entry> &Registry() {
    static const std::map<std::string, Entry> table = [] {
        std::map<std::string, Entry> t;
        const auto real = [&t](const std::string &k, auto access) {
            t[k] = {[access](RunConfig &c, const std::string &key, const std::string &v) {
                        access(c) = ParseDouble(key, v);
                    },
                    [access](const RunConfig &c) { return Num(access(c)); }};
        };
        const auto integer = [&t](const std::string &k, auto access) {
            t[k] = {[access](RunConfig &c, const std::string &key, const std::string &v) {
                        using T = std::remove_reference_t<decltype(access(c))>;
                        const long long parsed = ParseInt(key, v);
                        if constexpr (std::is_unsigned_v<T>) {
                            if (parsed < 0) throw ConfigError("'" + key + "' must be >= 0");
                        }
                        access(c) = static_cast<T>(parsed);
                    },
                    [access](const RunConfig &c) { return std::to_string(access(c)); }};
        };
        const auto flag = [&t](const std::string &k, auto access) {
            t[k] = {[access](RunConfig &c, const std::string &key, const std::string &v) {
                        access(c) = ParseBool(key, v);
                    },
                    [access](const RunConfig &c) {
                        return std::string(access(c) ? "true" : "false");
                    }};
        };

        integer("window_n", [](auto &c) -> auto & { return c.frontend.window_n; });
        real("range_diff_threshold", [](auto &c) -> auto & { return c.frontend.range_diff_threshold; });
        integer("scan_row_window", [](auto &c) -> auto & { return c.frontend.scan_row_window; });
        integer("revert_k", [](auto &c) -> auto & { return c.frontend.revert_k; });
        real("revert_search_radius", [](auto &c) -> auto & { return c.frontend.revert_search_radius; });
        real("revert_dist_eps", [](auto &c) -> auto & { return c.frontend.revert_dist_eps; });
        real("revert_angle_eps", [](auto &c) -> auto & { return c.frontend.revert_angle_eps_deg; });
        flag("revert_enabled", [](auto &c) -> auto & { return c.frontend.revert_enabled; });
        flag("revert_use_distance", [](auto &c) -> auto & { return c.frontend.revert_use_distance; });
        flag("revert_use_angle", [](auto &c) -> auto & { return c.frontend.revert_use_angle; });
        integer("width", [](auto &c) -> auto & { return c.frontend.projection.width; });
        integer("height", [](auto &c) -> auto & { return c.frontend.projection.height; });
        real("fov_up", [](auto &c) -> auto & { return c.frontend.projection.fov_up_deg; });
        real("fov_down", [](auto &c) -> auto & { return c.frontend.projection.fov_down_deg; });

        real("query_radius", [](auto &c) -> auto & { return c.backend.query_radius; });
        real("lambda_thres", [](auto &c) -> auto & { return c.backend.lambda_thres_deg; });
        real("occ_prob_threshold", [](auto &c) -> auto & { return c.backend.occ_prob_threshold; });
        integer("min_check", [](auto &c) -> auto & { return c.backend.min_check; });
        real("voxel_size", [](auto &c) -> auto & { return c.backend.voxel_size; });
        integer("normal_k", [](auto &c) -> auto & { return c.backend.normal_k; });
        flag("incident_correction", [](auto &c) -> auto & { return c.backend.incident_correction; });
        flag("visibility_check", [](auto &c) -> auto & { return c.backend.visibility_check; });
        flag("splat_footprint", [](auto &c) -> auto & { return c.backend.splat_footprint; });
        integer("num_cells", [](auto &c) -> auto & { return c.num_cells; });
        real("max_depth", [](auto &c) -> auto & { return c.max_depth; });
        real("backend_fov_margin", [](auto &c) -> auto & { return c.backend_fov_margin; });
        real("first_cell_depth", [](auto &c) -> auto & { return c.first_cell_depth; });

        t["backend_width"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                                  c.backend_width = static_cast<int>(ParseInt(k, v));
                              },
                              [](const RunConfig &c) { return Opt(c.backend_width); }};
        t["backend_height"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                                   c.backend_height = static_cast<int>(ParseInt(k, v));
                               },
                               [](const RunConfig &c) { return Opt(c.backend_height); }};
        t["backend_fov_up"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                                   c.backend_fov_up = ParseDouble(k, v);
                               },
                               [](const RunConfig &c) { return Opt(c.backend_fov_up); }};
        t["backend_fov_down"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                                     c.backend_fov_down = ParseDouble(k, v);
                                 },
                                 [](const RunConfig &c) { return Opt(c.backend_fov_down); }};

        t["mode"] = {[](RunConfig &c, const std::string &, const std::string &v) { c.mode = ParsePipelineMode(v); },
                     [](const RunConfig &c) { return ToString(c.mode); }};
        integer("jobs", [](auto &c) -> auto & { return c.jobs; });
        t["query_lag"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                              c.query_lag = ParseCount(k, v);
                          },
                          [](const RunConfig &c) { return std::to_string(c.query_lag); }};
        t["max_backlog"] = {[](RunConfig &c, const std::string &k, const std::string &v) {
                                c.max_backlog = ParseCount(k, v);
                            },
                            [](const RunConfig &c) { return std::to_string(c.max_backlog); }};
        return t;
    }();
    return table;
}

std::string Trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void ApplyOverride(RunConfig &cfg, const std::string &key, const std::string &value) {
    const auto &table = Registry();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.set(cfg, key, Trim(value));
}

std::vector<std::string> ConfigKeys() {
    std::vector<std::string> keys;
    for (const auto &[k, e] : Registry()) keys.push_back(k);
    return keys;
}

RunConfig ParseConfig(const std::string &text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = Trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            ApplyOverride(base, Trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError &e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RunConfig LoadConfig(const std::filesystem::path &path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ParseConfig(ss.str(), std::move(base));
}

std::string SerializeConfig(const RunConfig &cfg) {
    std::ostringstream os;
    for (const auto &[k, e] : Registry()) {
        const std::string v = e.get(cfg);
        if (!v.empty()) os << k << " = " << v << '\n';
    }
    return os.str();
}

}  // namespace staticmap
