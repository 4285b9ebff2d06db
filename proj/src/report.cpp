#include "covcal/report.hpp"

#include "covcal/error.hpp"

#include <cstdio>
#include <fstream>

namespace covcal {

using nlohmann::json;

namespace {

json front_end_to_json(const FrontEndConfig& cfg) {
    json doc;
    doc["type"] = front_end_type_name(cfg.type);
    if (cfg.type == FrontEndType::feature) {
        doc["subpatch_size"] = cfg.feature.subpatch_size;
        doc["stride"] = cfg.feature.stride;
        doc["inlier_tol"] = cfg.feature.inlier_tol;
        doc["detector_threshold"] = cfg.feature.detector_threshold;
        doc["max_keypoints"] = cfg.feature.max_keypoints;
    }
    return doc;
}

FrontEndConfig front_end_from_json(const json& doc) {
    FrontEndConfig cfg;
    const std::string type = doc.at("type").get<std::string>();
    if (type == "ncc") {
        cfg.type = FrontEndType::ncc;
    } else if (type == "feature") {
        cfg.type = FrontEndType::feature;
        if (doc.contains("subpatch_size")) cfg.feature.subpatch_size = doc["subpatch_size"];
        if (doc.contains("stride")) cfg.feature.stride = doc["stride"];
        if (doc.contains("inlier_tol")) cfg.feature.inlier_tol = doc["inlier_tol"];
        if (doc.contains("detector_threshold"))
            cfg.feature.detector_threshold = doc["detector_threshold"];
        if (doc.contains("max_keypoints")) cfg.feature.max_keypoints = doc["max_keypoints"];
    } else {
        throw Error(ErrorKind::config, "unknown front_end type '" + type + "'");
    }
    return cfg;
}

json curve_to_json(const OvlCurve& curve) {
    json arr = json::array();
    for (const OvlPoint& p : curve.points) arr.push_back({{"radius", p.radius}, {"ovl", p.ovl}});
    return arr;
}

OvlCurve curve_from_json(const json& arr) {
    OvlCurve curve;
    for (const json& p : arr)
        curve.points.push_back({p.at("radius").get<int>(), p.at("ovl").get<double>()});
    return curve;
}

json summaries_to_json(const std::vector<RadiusScoreSummary>& summaries) {
    json arr = json::array();
    for (const RadiusScoreSummary& s : summaries) {
        arr.push_back({{"radius", s.radius},
                       {"truth_mean", s.truth_fit.mean},
                       {"truth_std", s.truth_fit.std},
                       {"truth_count", s.truth_fit.n},
                       {"impostor_mean", s.impostor_fit.mean},
                       {"impostor_std", s.impostor_fit.std},
                       {"impostor_count", s.impostor_fit.n}});
    }
    return arr;
}

std::vector<RadiusScoreSummary> summaries_from_json(const json& arr) {
    std::vector<RadiusScoreSummary> out;
    for (const json& s : arr) {
        RadiusScoreSummary summary;
        summary.radius = s.at("radius").get<int>();
        summary.truth_fit = {s.at("truth_mean").get<double>(), s.at("truth_std").get<double>(),
                             s.at("truth_count").get<std::size_t>()};
        summary.impostor_fit = {s.at("impostor_mean").get<double>(),
                                s.at("impostor_std").get<double>(),
                                s.at("impostor_count").get<std::size_t>()};
        out.push_back(summary);
    }
    return out;
}

}  // namespace

json calibration_config_to_json(const CalibrationConfig& cfg) {
    json doc;
    doc["radii"] = cfg.radii;
    doc["n_samples"] = cfg.n_samples;
    doc["ovl_threshold"] = cfg.ovl_threshold;
    doc["match_tol"] = cfg.match_tol;
    doc["rng_seed"] = cfg.rng_seed;
    doc["front_end"] = front_end_to_json(cfg.front_end);
    doc["max_impostors_per_sample"] = cfg.max_impostors_per_sample;
    return doc;
}

CalibrationConfig calibration_config_from_json(const json& doc) {
    CalibrationConfig cfg;
    if (doc.contains("radii")) cfg.radii = doc["radii"].get<std::vector<int>>();
    if (doc.contains("n_samples")) cfg.n_samples = doc["n_samples"].get<int>();
    if (doc.contains("ovl_threshold")) cfg.ovl_threshold = doc["ovl_threshold"].get<double>();
    if (doc.contains("match_tol")) cfg.match_tol = doc["match_tol"].get<int>();
    if (doc.contains("rng_seed")) cfg.rng_seed = doc["rng_seed"].get<std::uint64_t>();
    if (doc.contains("front_end")) cfg.front_end = front_end_from_json(doc["front_end"]);
    if (doc.contains("max_impostors_per_sample"))
        cfg.max_impostors_per_sample = doc["max_impostors_per_sample"].get<std::size_t>();
    return cfg;
}

EvalConfig eval_config_from_json(const json& doc) {
    EvalConfig cfg;
    if (doc.contains("radii")) cfg.radii = doc["radii"].get<std::vector<int>>();
    if (doc.contains("m_samples")) cfg.m_samples = doc["m_samples"].get<int>();
    if (doc.contains("match_tol")) cfg.match_tol = doc["match_tol"].get<int>();
    return cfg;
}

json calibration_to_json(const CalibrationOutcome& outcome) {
    json doc;
    doc["schema"] = "covcal.calibration/1";
    doc["pair"] = outcome.pair_name;
    doc["selected_radius"] = outcome.selected_radius;
    doc["curve"] = curve_to_json(outcome.curve);
    doc["config"] = calibration_config_to_json(outcome.config);
    doc["per_radius"] = summaries_to_json(outcome.per_radius);
    if (!outcome.per_pair.empty()) {
        json pairs = json::array();
        for (const CalibrationOutcome& p : outcome.per_pair)
            pairs.push_back(calibration_to_json(p));
        doc["per_pair"] = std::move(pairs);
    }
    return doc;
}

CalibrationOutcome calibration_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("schema", "") != "covcal.calibration/1")
        throw Error(ErrorKind::format, "calibration JSON: missing or unknown schema tag");
    CalibrationOutcome outcome;
    outcome.pair_name = doc.value("pair", "");
    outcome.selected_radius = doc.at("selected_radius").get<double>();
    outcome.curve = curve_from_json(doc.at("curve"));
    outcome.config = calibration_config_from_json(doc.at("config"));
    outcome.per_radius = summaries_from_json(doc.at("per_radius"));
    if (doc.contains("per_pair"))
        for (const json& p : doc["per_pair"])
            outcome.per_pair.push_back(calibration_from_json(p));
    return outcome;
}

CalibrationOutcome load_calibration_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open calibration JSON: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::format,
                    "malformed calibration JSON (" + path.string() + "): " + e.what());
    }
    try {
        return calibration_from_json(doc);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format,
                    "calibration JSON missing fields (" + path.string() + "): " + e.what());
    }
}

json eval_report_to_json(const EvalReport& report) {
    json doc;
    doc["schema"] = "covcal.eval/1";
    doc["pair"] = report.pair_name;
    doc["p_g"] = report.p_g;
    doc["selected_radius"] = report.selected_radius;
    doc["selected_radius_evaluated"] = report.selected_radius_evaluated;
    doc["m_at_selected"] = report.m_at_selected;
    json rows = json::array();
    for (const RadiusEval& e : report.per_radius) {
        rows.push_back({{"radius", e.radius},
                        {"recall", e.recall},
                        {"mean_time_s", e.mean_time_s},
                        {"m_metric", e.m_metric}});
    }
    doc["per_radius"] = std::move(rows);
    return doc;
}

std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

void write_ovl_csv(const OvlCurve& curve, const std::filesystem::path& path) {
    std::string text = "radius,ovl\n";
    for (const OvlPoint& p : curve.points)
        text += std::to_string(p.radius) + "," + format_csv_value(p.ovl) + "\n";
    write_text_file(text, path);
}

void write_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::string text = "radius,recall,mean_time_s,m_metric\n";
    for (const RadiusEval& e : report.per_radius) {
        text += std::to_string(e.radius) + "," + format_csv_value(e.recall) + "," +
                format_csv_value(e.mean_time_s) + "," + format_csv_value(e.m_metric) + "\n";
    }
    write_text_file(text, path);
}

void write_timing_csv(const std::vector<TimingRow>& rows,
                      const std::filesystem::path& path) {
    std::string text = "radius,mean_time_s\n";
    for (const TimingRow& r : rows)
        text += std::to_string(r.radius) + "," + format_csv_value(r.mean_time_s) + "\n";
    write_text_file(text, path);
}

}  // namespace covcal
