#include "specmcd/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specmcd {

void PipelineConfig::validate() const {
  fusion.validate();
  if (mean_filter_window < 1 || mean_filter_window % 2 == 0) {
    throw ConfigError("mean_filter_window must be a positive odd integer");
  }
  if (svd_rank < 1) {
    throw ConfigError("svd_rank must be at least 1");
  }
  if (!(scene_score_threshold >= 0.0) || !(scene_score_threshold <= 1.0)) {
    throw ConfigError("scene_score_threshold must lie in [0, 1]");
  }
  if (!(mock_saturation > 0.0)) {
    throw ConfigError("mock_saturation must be positive");
  }
  if (workers < 1) {
    throw ConfigError("workers must be at least 1");
  }
  if (!(worker_timeout_seconds > 0.0)) {
    throw ConfigError("worker_timeout_seconds must be positive");
  }
}

std::string PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["scale_weights"] = {fusion.scale_weights[0], fusion.scale_weights[1],
                        fusion.scale_weights[2]};
  j["grad_thresh"] = fusion.grad_thresh;
  j["p_hi"] = fusion.p_hi;
  j["p_lo"] = fusion.p_lo;
  j["mean_filter_window"] = mean_filter_window;
  j["svd_rank"] = svd_rank;
  j["scene_score_threshold"] = scene_score_threshold;
  j["mock_saturation"] = mock_saturation;
  j["workers"] = workers;
  j["worker_timeout_seconds"] = worker_timeout_seconds;
  return j.dump(2);
}

PipelineConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }

  PipelineConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scale_weights") {
        if (!value.is_array() || value.size() != 3) {
          throw ConfigError("scale_weights must be an array of 3 numbers");
        }
        for (int i = 0; i < 3; ++i) {
          cfg.fusion.scale_weights[i] = value[i].get<double>();
        }
      } else if (key == "grad_thresh") {
        cfg.fusion.grad_thresh = value.get<double>();
      } else if (key == "p_hi") {
        cfg.fusion.p_hi = value.get<double>();
      } else if (key == "p_lo") {
        cfg.fusion.p_lo = value.get<double>();
      } else if (key == "mean_filter_window") {
        cfg.mean_filter_window = value.get<int>();
      } else if (key == "svd_rank") {
        cfg.svd_rank = value.get<int>();
      } else if (key == "scene_score_threshold") {
        cfg.scene_score_threshold = value.get<double>();
      } else if (key == "mock_saturation") {
        cfg.mock_saturation = value.get<double>();
      } else if (key == "workers") {
        cfg.workers = value.get<int>();
      } else if (key == "worker_timeout_seconds") {
        cfg.worker_timeout_seconds = value.get<double>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") +
                      e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace specmcd
