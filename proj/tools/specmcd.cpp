// Command-line front end: detect, evaluate, synth, render.
//
// Exit codes: 0 success, 2 bad usage or bad input, 1 anything internal.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specmcd/evaluation.hpp"
#include "specmcd/pipeline.hpp"
#include "specmcd/raster_io.hpp"
#include "specmcd/render.hpp"
#include "specmcd/subprocess_classifier.hpp"
#include "specmcd/synth.hpp"

namespace {

using namespace specmcd;

constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kUsageError = 2;

struct DetectArgs {
  std::string input_dir;
  std::string output_dir;
  std::string config_path;
  std::string classifier_spec = "builtin:spectral";
  bool emit_intermediates = false;

  // Per-key config overrides; only set flags are applied.
  std::optional<std::vector<double>> scale_weights;
  std::optional<double> grad_thresh, p_hi, p_lo;
  std::optional<int> mean_filter_window, svd_rank, workers;
  std::optional<double> scene_score_threshold, mock_saturation;
  std::optional<double> worker_timeout_seconds;
};

PipelineConfig merged_config(const DetectArgs& args) {
  PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  if (args.scale_weights) {
    if (args.scale_weights->size() != 3) {
      throw ConfigError("--scale-weights needs exactly 3 values");
    }
    for (int i = 0; i < 3; ++i) {
      cfg.fusion.scale_weights[i] = (*args.scale_weights)[i];
    }
  }
  if (args.grad_thresh) cfg.fusion.grad_thresh = *args.grad_thresh;
  if (args.p_hi) cfg.fusion.p_hi = *args.p_hi;
  if (args.p_lo) cfg.fusion.p_lo = *args.p_lo;
  if (args.mean_filter_window) cfg.mean_filter_window = *args.mean_filter_window;
  if (args.svd_rank) cfg.svd_rank = *args.svd_rank;
  if (args.scene_score_threshold) {
    cfg.scene_score_threshold = *args.scene_score_threshold;
  }
  if (args.mock_saturation) cfg.mock_saturation = *args.mock_saturation;
  if (args.workers) cfg.workers = *args.workers;
  if (args.worker_timeout_seconds) {
    cfg.worker_timeout_seconds = *args.worker_timeout_seconds;
  }
  cfg.validate();
  return cfg;
}

std::unique_ptr<Classifier> make_classifier(const std::string& spec,
                                            const PipelineConfig& cfg) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "builtin") {
    const std::string which =
        colon == std::string::npos ? "spectral" : spec.substr(colon + 1);
    if (which != "spectral") {
      throw ConfigError("unknown builtin classifier '" + which + "'");
    }
    return std::make_unique<SpectralMockClassifier>(cfg.mock_saturation);
  }
  if (kind == "subprocess") {
    if (colon == std::string::npos || colon + 1 == spec.size()) {
      throw ConfigError("subprocess classifier needs a command line");
    }
    SubprocessOptions opts;
    opts.workers = cfg.workers;
    opts.timeout_seconds = cfg.worker_timeout_seconds;
    return std::make_unique<SubprocessClassifier>(spec.substr(colon + 1), opts);
  }
  throw ConfigError("classifier spec must be builtin:spectral or "
                    "subprocess:<command>");
}

// Re-throws with the failing stage prepended so diagnostics say where a run
// died, not just why.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  auto tag = [name](const char* what) {
    return std::string("[") + name + "] " + what;
  };
  try {
    return fn();
  } catch (const IoError& e) {
    throw IoError(tag(e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e.what()));
  } catch (const BackendError& e) {
    throw BackendError(tag(e.what()));
  } catch (const Error& e) {
    throw Error(tag(e.what()));
  }
}

int cmd_detect(const DetectArgs& args) {
  const PipelineConfig cfg = stage("config", [&] { return merged_config(args); });
  const auto classifier =
      stage("classifier", [&] { return make_classifier(args.classifier_spec, cfg); });
  const MultibandRaster raster =
      stage("load", [&] { return load_multiband(args.input_dir); });

  const DetectResult result =
      stage("detect", [&] { return run_detect(raster, cfg, *classifier); });
  stage("write", [&] {
    write_detect_outputs(result, args.output_dir, args.emit_intermediates);
  });

  for (const auto& [stage, seconds] : result.stage_seconds) {
    std::fprintf(stderr, "stage %-10s %8.3f s\n", stage.c_str(), seconds);
  }
  std::cout << result.manifest_json;
  return kOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& ref_path) {
  const BinaryMask pred = load_mask(pred_path);
  const BinaryMask ref = load_mask(ref_path);
  if (!pred.same_shape(ref)) {
    std::cerr << "error: masks are " << pred.width << "x" << pred.height
              << " vs " << ref.width << "x" << ref.height << "\n";
    return kUsageError;
  }
  const ConfusionCounts counts = confusion(pred, ref);
  const Metrics metrics = compute_metrics(counts);
  std::cout << metrics_json(metrics, counts);
  return kOk;
}

int cmd_synth(const ScenePreset& preset, const std::string& out_dir) {
  const SyntheticScene scene = generate_scene(preset);
  const std::filesystem::path dir(out_dir);
  save_multiband(scene.raster, dir);
  save_mask(scene.truth, (dir / "truth.pgm").string());
  std::ofstream manifest(dir / "scene.json", std::ios::binary);
  if (!manifest) {
    throw IoError("cannot write '" + (dir / "scene.json").string() + "'");
  }
  manifest << scene.manifest_json;
  std::cout << scene.manifest_json;
  return kOk;
}

int cmd_render(const std::string& input_path, const std::string& output_path) {
  // Masks are PGM (P5 magic); everything else is treated as a raw grid with
  // a JSON sidecar.
  std::ifstream probe(input_path, std::ios::binary);
  if (!probe) {
    throw IoError("cannot open '" + input_path + "'");
  }
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && magic[1] == '5') {
    render_mask_png(load_mask(input_path), output_path);
  } else {
    render_grid_png(load_grid(input_path), output_path);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly supervised cloud detection pipeline"};
  app.require_subcommand(1);

  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand("detect", "Run detection on a raster container");
  detect->add_option("--input", detect_args.input_dir, "Input container directory")
      ->required();
  detect->add_option("--output", detect_args.output_dir, "Output directory")
      ->required();
  detect->add_option("--config", detect_args.config_path, "JSON config file");
  detect->add_option("--classifier", detect_args.classifier_spec,
                     "builtin:spectral or subprocess:<command>");
  detect->add_flag("--emit-intermediates", detect_args.emit_intermediates,
                   "Also write probability maps, thickness maps and the initial mask");
  auto opt_vec = [&](const char* name, auto& slot, const char* help) {
    detect->add_option_function<std::decay_t<decltype(*slot)>>(
        name,
        [&slot](const auto& v) { slot = v; },
        help);
  };
  opt_vec("--scale-weights", detect_args.scale_weights,
          "Three fusion weights, coarse to fine (override)");
  opt_vec("--grad-thresh", detect_args.grad_thresh,
          "Boundary gradient threshold (override)");
  opt_vec("--p-hi", detect_args.p_hi, "Dense-regime lower bound on P (override)");
  opt_vec("--p-lo", detect_args.p_lo, "Large-regime upper bound on P (override)");
  opt_vec("--mean-filter-window", detect_args.mean_filter_window,
          "Mean filter window, odd (override)");
  opt_vec("--svd-rank", detect_args.svd_rank, "Truncation rank (override)");
  opt_vec("--scene-score-threshold", detect_args.scene_score_threshold,
          "Scene mask score threshold (override)");
  opt_vec("--mock-saturation", detect_args.mock_saturation,
          "Builtin classifier saturation (override)");
  opt_vec("--workers", detect_args.workers,
          "Window classification parallelism (override)");
  opt_vec("--worker-timeout-seconds", detect_args.worker_timeout_seconds,
          "Per-frame subprocess timeout (override)");

  std::string eval_pred, eval_ref;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare two masks");
  evaluate->add_option("--pred", eval_pred, "Predicted mask (PGM)")->required();
  evaluate->add_option("--ref", eval_ref, "Reference mask (PGM)")->required();

  ScenePreset preset;
  std::string synth_kind = "dense";
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scene");
  synth->add_option("--kind", synth_kind, "dense or large_area");
  synth->add_option("--width", preset.width, "Scene width (>= 256)");
  synth->add_option("--height", preset.height, "Scene height (>= 256)");
  synth->add_option("--seed", preset.seed, "Generator seed");
  synth->add_option("--distractors", preset.distractors,
                    "Bright non-cloud squares to add");
  synth->add_option("--out", synth_out, "Output directory")->required();

  std::string render_in, render_out;
  CLI::App* render = app.add_subcommand("render", "Render a grid or mask to PNG");
  render->add_option("--input", render_in, "Grid (.f32 + sidecar) or mask (PGM)")
      ->required();
  render->add_option("--output", render_out, "PNG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (detect->parsed()) return cmd_detect(detect_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_pred, eval_ref);
    if (synth->parsed()) {
      preset.kind = parse_scene_kind(synth_kind);
      return cmd_synth(preset, synth_out);
    }
    if (render->parsed()) return cmd_render(render_in, render_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}
