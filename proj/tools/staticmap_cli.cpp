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
// staticmap command line tool: run, synth, eval, export.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "staticmap/config.hpp"
#include "staticmap/dataset_io.hpp"
#include "staticmap/evaluation.hpp"
#include "staticmap/pipeline.hpp"
#include "staticmap/synth.hpp"

namespace fs = std::filesystem;
using namespace staticmap;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Where frames come from: a scene file, a preset scene, or a KITTI directory.
struct InputOptions {
    std::string scene;
    std::string preset;
    std::string kitti;
    std::size_t first = 0;
    std::size_t count = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> frames;
    std::optional<std::size_t> agents;

    void Register(CLI::App *app) {
        app->add_option("--scene", scene, "Scene description file");
        app->add_option("--preset", preset, "Preset scene: crowd, corridor, square, flat");
        app->add_option("--kitti", kitti, "SemanticKITTI style sequence directory");
        app->add_option("--first", first, "First frame of a KITTI subsequence");
        app->add_option("--count", count, "Number of KITTI frames (0: all)");
        app->add_option("--seed", seed, "Scene seed");
        app->add_option("--frames", frames, "Override the number of synthetic frames");
        app->add_option("--agents", agents, "Number of agents for preset scenes");
    }

    bool is_synthetic() const { return kitti.empty(); }

    synth::SceneSpec Scene() const {
        std::size_t given = !scene.empty() + !preset.empty();
        if (given != 1) throw UsageError("exactly one of --scene, --preset or --kitti is required");
        synth::SceneSpec spec;
        if (!scene.empty()) {
            spec = synth::LoadScene(scene);
            if (seed) spec.seed = *seed;
        } else {
            const std::uint64_t s = seed.value_or(1);
            if (agents && preset == "crowd") spec = synth::CrowdCorridor(s, *agents);
            else if (agents && preset == "square") spec = synth::OpenSquare(s, *agents);
            else if (agents && preset == "flat") spec = synth::FlatGround(s, *agents);
            else {
                try {
                    spec = synth::PresetScene(preset, s);
                } catch (const std::invalid_argument &e) {
                    throw UsageError(e.what());
                }
            }
        }
        if (frames) spec.num_frames = *frames;
        spec.validate();
        return spec;
    }

    std::unique_ptr<FrameSource> Source() const {
        if (!kitti.empty()) {
            if (!scene.empty() || !preset.empty()) throw UsageError("--kitti cannot be combined with a scene");
            return std::make_unique<KittiFrameSource>(SequenceSource::Open(kitti, first, count));
        }
        return std::make_unique<SceneFrameSource>(Scene());
    }
};

// One `--key` option per config key; hyphenated spellings are accepted too.
struct ConfigOptions {
    std::string config_file;
    std::map<std::string, std::string> values;

    void Register(CLI::App *app) {
        app->add_option("--config", config_file, "Config file with key = value lines");
        for (const auto &key : ConfigKeys()) {
            std::string names = "--" + key;
            std::string hyphen = key;
            std::replace(hyphen.begin(), hyphen.end(), '_', '-');
            if (hyphen != key) names += ",--" + hyphen;
            app->add_option(names, values[key], "Config key " + key);
        }
    }

    RunConfig Build(const synth::SceneSpec *scene) const {
        RunConfig cfg;
        // Synthetic scenes dictate the sensor model unless overridden below.
        if (scene) cfg.frontend.projection = scene->projection;
        if (!config_file.empty()) cfg = LoadConfig(config_file, cfg);
        for (const auto &[key, value] : values) {
            if (!value.empty()) ApplyOverride(cfg, key, value);
        }
        cfg.validate();
        return cfg;
    }
};

CloudFormat FormatOf(const std::string &path, const std::string &format) {
    if (format.empty()) {
        const auto fmt = CloudFormatFromPath(path);
        if (!fmt) throw UsageError("cannot infer the output format of " + path + "; pass --format");
        return *fmt;
    }
    try {
        return ParseCloudFormat(format);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

GroundTruthVoxels GroundTruthOf(const FrameSource &source, double voxel_size, std::size_t limit) {
    GroundTruthVoxels gt;
    gt.voxel_size = voxel_size;
    for (std::size_t i = 0; i < limit; ++i) {
        const Frame f = source.Load(i);
        if (!f.gt_labels) throw DataError("frame " + std::to_string(i) + " has no labels");
        gt.Add(TransformCloud(f.cloud, f.pose), *f.gt_labels);
    }
    return gt;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Online static map building from LiDAR sequences"};
    app.require_subcommand(1);

    InputOptions run_input, synth_input, eval_input;
    ConfigOptions run_config;
    std::string run_output, run_format, run_csv;

    auto *run = app.add_subcommand("run", "Run the front-end and back-end pipeline");
    run_input.Register(run);
    run_config.Register(run);
    run->add_option("--output,-o", run_output, "Write the static map (.ply or .pcd)");
    run->add_option("--format", run_format, "Output format: ply or pcd");
    run->add_option("--csv", run_csv, "Append an evaluation row to this CSV file");

    std::string synth_out, synth_scene_out;
    auto *syn = app.add_subcommand("synth", "Generate a labeled synthetic sequence");
    synth_input.Register(syn);
    syn->add_option("--out", synth_out, "Output sequence directory (KITTI layout)");
    syn->add_option("--write-scene", synth_scene_out, "Also write the scene description");

    std::string eval_map;
    double eval_voxel = 0.2;
    std::size_t eval_window = 10;
    auto *eval = app.add_subcommand("eval", "Score an exported static map against labels");
    eval_input.Register(eval);
    eval->add_option("--map", eval_map, "Static map (.ply, .pcd or .bin)")->required();
    eval->add_option("--voxel_size,--voxel-size", eval_voxel, "Voxel size");
    eval->add_option("--window_n,--window-n", eval_window,
                     "Window length; frames after the last complete window are ignored");

    std::string export_in, export_out, export_format;
    auto *exp = app.add_subcommand("export", "Convert point cloud formats");
    exp->add_option("--input,-i", export_in, "Input cloud (.ply, .pcd or .bin)")->required();
    exp->add_option("--output,-o", export_out, "Output cloud")->required();
    exp->add_option("--format", export_format, "ply or pcd (default: from extension)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (run->parsed()) {
            std::optional<synth::SceneSpec> scene;
            if (run_input.is_synthetic()) scene = run_input.Scene();
            const RunConfig cfg = run_config.Build(scene ? &*scene : nullptr);
            std::unique_ptr<FrameSource> source = scene ? std::make_unique<SceneFrameSource>(*scene)
                                                        : run_input.Source();
            std::optional<CloudFormat> out_format;
            if (!run_output.empty()) out_format = FormatOf(run_output, run_format);
            const PipelineResult result = RunPipeline(*source, cfg);
            std::cout << "mode=" << ToString(cfg.mode) << '\n';
            if (result.report) std::cout << result.report->ToKeyValue();
            std::cout << "static_points=" << result.map.StaticCloud().size() << '\n';
            std::cout << result.stats.ToKeyValue();
            if (out_format) ExportCloud(result.map.StaticCloud(), *out_format, run_output);
            if (!run_csv.empty() && result.report) {
                const bool fresh = !fs::exists(run_csv);
                std::ofstream csv(run_csv, std::ios::app);
                if (!csv) throw DataError("cannot write " + run_csv);
                if (fresh) csv << EvalReport::CsvHeader() << '\n';
                csv << result.report->ToCsvRow(scene ? (run_input.preset.empty() ? run_input.scene : run_input.preset)
                                                     : run_input.kitti)
                    << '\n';
            }
        } else if (syn->parsed()) {
            if (synth_out.empty() && synth_scene_out.empty()) throw UsageError("synth needs --out or --write-scene");
            const synth::SceneSpec spec = synth_input.Scene();
            if (!synth_scene_out.empty()) {
                std::ofstream out(synth_scene_out);
                if (!out) throw DataError("cannot write " + synth_scene_out);
                out << synth::SerializeScene(spec);
            }
            if (!synth_out.empty()) {
                const auto frames = synth::GenerateSequence(spec);
                WriteSequence(synth_out, frames);
                std::size_t points = 0, dynamic = 0;
                for (const auto &f : frames) {
                    points += f.cloud.size();
                    for (const auto l : *f.gt_labels) dynamic += l == Label::Dynamic;
                }
                std::cout << "frames=" << frames.size() << "\npoints=" << points << "\ndynamic_points=" << dynamic
                          << '\n';
            }
        } else if (eval->parsed()) {
            const auto source = eval_input.Source();
            if (eval_window == 0) throw UsageError("--window_n must be > 0");
            const std::size_t used = source->size() / eval_window * eval_window;
            const GroundTruthVoxels gt = GroundTruthOf(*source, eval_voxel, used);
            const PointCloud map = ImportCloud(eval_map);
            std::cout << Score(map, gt, eval_voxel).ToKeyValue();
        } else if (exp->parsed()) {
            const CloudFormat fmt = FormatOf(export_out, export_format);
            ExportCloud(ImportCloud(export_in), fmt, export_out);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kOk;
}
