#include "specmcd/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "specmcd/raster_io.hpp"

namespace specmcd {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& sink)
      : sink_(sink), last_(std::chrono::steady_clock::now()) {}

  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.emplace_back(stage,
                       std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
  std::chrono::steady_clock::time_point last_;
};

std::string build_manifest(const MultibandRaster& raster,
                           const PipelineConfig& config,
                           const Classifier& classifier,
                           const DetectResult& result) {
  nlohmann::ordered_json j;
  j["tool"] = "specmcd";
  nlohmann::ordered_json input;
  input["width"] = raster.width();
  input["height"] = raster.height();
  nlohmann::ordered_json band_names = nlohmann::ordered_json::array();
  for (const Band& band : raster.bands()) {
    band_names.push_back(std::string(to_string(band.name)));
  }
  input["bands"] = std::move(band_names);
  j["input"] = std::move(input);
  j["classifier"] = classifier.describe();
  j["config"] = nlohmann::ordered_json::parse(config.to_json());

  nlohmann::ordered_json windows;
  for (int scale : kWindowScales) {
    windows[std::to_string(scale)] =
        enumerate_windows(raster.width(), raster.height(), scale).size();
  }
  j["windows"] = std::move(windows);

  j["fusion"] = {{"boundary_fraction", result.fusion.boundary_fraction},
                 {"k", result.fusion.k},
                 {"regime", std::string(to_string(result.fusion.regime))}};
  j["thresholds"] = {{"mu_dense", result.thresholds.mu_dense},
                     {"mu_large", result.thresholds.mu_large},
                     {"mu_final", result.thresholds.mu_final},
                     {"rho_mean", result.thresholds.rho_mean},
                     {"dist_max", result.thresholds.dist_max}};
  j["flags"] = result.flags;
  j["mask_pixels"] = {{"initial", result.m_init.count_true()},
                      {"final", result.m_final.count_true()}};
  return j.dump(2) + "\n";
}

}  // namespace

DetectResult run_detect(const MultibandRaster& raster,
                        const PipelineConfig& config,
                        const Classifier& classifier) {
  config.validate();

  DetectResult result;
  StageClock clock(result.stage_seconds);

  result.maps = multiscale_maps(raster, classifier,
                                config.scene_score_threshold, config.workers);
  clock.lap("classify");

  result.ctm = build_ctm_bundle(raster, result.maps, config.mean_filter_window,
                                config.svd_rank);
  clock.lap("thickness");

  result.rho_large =
      large_area_probability(result.maps, result.ctm.svd, config.fusion);
  result.rho_dense =
      dense_probability(result.maps, result.ctm.mean, config.fusion);
  result.gradient = sobel_gradient(result.ctm.refined);
  result.m_bound = boundary_mask(result.gradient, config.fusion.grad_thresh);
  result.m_cloud = mask_intersection(result.maps.mask256, result.maps.mask128,
                                     result.maps.mask64);
  const double p = boundary_fraction(result.m_bound, result.m_cloud);
  auto fused = fuse_probabilities(result.rho_dense, result.rho_large, p,
                                  config.fusion);
  result.rho_fused = std::move(fused.first);
  result.fusion = fused.second;
  clock.lap("fusion");

  result.thresholds = select_thresholds(result.rho_fused, result.maps,
                                        result.fusion, result.flags);
  result.m_init = initial_mask(result.rho_fused, result.thresholds.mu_final);
  clock.lap("thresholds");

  if (result.m_init.count_true() == 0) {
    result.flags.push_back("expansion-skipped-empty-initial-mask");
  }
  const Grid distance = euclidean_distance_transform(result.m_init);
  result.rho_dist = distance_weighted_probability(
      result.rho_fused, distance, result.thresholds.dist_max,
      result.thresholds.rho_mean);
  result.m_final = final_mask(result.rho_dist, result.thresholds.mu_final);
  clock.lap("expansion");

  result.manifest_json = build_manifest(raster, config, classifier, result);
  return result;
}

void write_detect_outputs(const DetectResult& result,
                          const std::string& out_dir,
                          bool emit_intermediates) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir +
                  "': " + ec.message());
  }
  const fs::path dir(out_dir);

  save_mask(result.m_final, (dir / "final_mask.pgm").string());
  {
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) {
      throw IoError("cannot write '" + (dir / "manifest.json").string() + "'");
    }
    out << result.manifest_json;
  }
  if (!emit_intermediates) return;

  save_grid(result.maps.prob256, (dir / "rho256.f32").string(), "probability");
  save_grid(result.maps.prob128, (dir / "rho128.f32").string(), "probability");
  save_grid(result.maps.prob64, (dir / "rho64.f32").string(), "probability");
  save_grid(result.ctm.raw, (dir / "ctm_raw.f32").string(), "thickness");
  save_grid(result.ctm.refined, (dir / "ctm_refined.f32").string(),
            "thickness");
  save_grid(result.ctm.mean, (dir / "ctm_mean.f32").string(), "thickness");
  save_grid(result.ctm.svd, (dir / "ctm_svd.f32").string(), "thickness");
  save_grid(result.rho_large, (dir / "rho_large.f32").string(), "probability");
  save_grid(result.rho_dense, (dir / "rho_dense.f32").string(), "probability");
  save_grid(result.rho_fused, (dir / "rho_fused.f32").string(), "probability");
  save_grid(result.rho_dist, (dir / "rho_dist.f32").string(), "probability");
  save_grid(result.gradient, (dir / "gradient.f32").string(), "gradient");
  save_mask(result.m_init, (dir / "initial_mask.pgm").string());
}

}  // namespace specmcd
