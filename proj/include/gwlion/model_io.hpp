#ifndef GWLION_MODEL_IO_HPP
#define GWLION_MODEL_IO_HPP

#include <json.hpp>
#include <string>

#include "gwlion/evalkit.hpp"
#include "gwlion/forecaster.hpp"

namespace gwlion {

/// Pipeline settings plus the file paths a run touches. Parsed strictly:
/// unknown keys are a ConfigError.
struct RunConfig {
    PipelineConfig pipeline;
    std::string input;
    std::string out_dir = ".";
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& config);

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

nlohmann::json metrics_to_json(const MetricSet& metrics);
nlohmann::json cv_to_json(const CvSummary& summary);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// FNV-1a 64-bit digest of a file, as 16 hex digits (run manifests).
std::string file_checksum(const std::string& path);

}  // namespace gwlion

#endif
