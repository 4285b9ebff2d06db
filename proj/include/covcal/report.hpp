#pragma once

#include "covcal/calibration.hpp"
#include "covcal/evaluation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace covcal {

nlohmann::json calibration_to_json(const CalibrationOutcome& outcome);
CalibrationOutcome calibration_from_json(const nlohmann::json& doc);
CalibrationOutcome load_calibration_json(const std::filesystem::path& path);

// Config (de)serialization shared by outcome snapshots and the Python API.
// Parsing is lenient: absent fields keep their defaults.
nlohmann::json calibration_config_to_json(const CalibrationConfig& cfg);
CalibrationConfig calibration_config_from_json(const nlohmann::json& doc);
EvalConfig eval_config_from_json(const nlohmann::json& doc);

nlohmann::json eval_report_to_json(const EvalReport& report);

// CSV files: comma separated, header row, LF endings, 9 significant digits.
std::string format_csv_value(double v);
void write_ovl_csv(const OvlCurve& curve, const std::filesystem::path& path);
void write_eval_csv(const EvalReport& report, const std::filesystem::path& path);

struct TimingRow {
    int radius = 0;
    double mean_time_s = 0.0;
};
void write_timing_csv(const std::vector<TimingRow>& rows,
                      const std::filesystem::path& path);

void write_text_file(const std::string& text, const std::filesystem::path& path);

// Fig-style SVG plots (optional CLI output).
void write_ovl_svg(const CalibrationOutcome& outcome, const std::filesystem::path& path);
void write_recall_svg(const EvalReport& report, const std::filesystem::path& path);
void write_metric_svg(const EvalReport& report, const std::filesystem::path& path);
void write_timing_svg(const std::vector<TimingRow>& rows,
                      const std::filesystem::path& path);

}  // namespace covcal
