#include "covcal/cli.hpp"
#include "covcal/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace covcal {

using nlohmann::json;

namespace {

// Line number of a byte offset, for parse errors.
int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::config, "cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config, path.string() + ":" +
                                           std::to_string(line_of_offset(text, e.byte)) +
                                           ": " + e.what());
    }
}

[[noreturn]] void config_fail(const std::filesystem::path& path, const std::string& what) {
    throw Error(ErrorKind::config, path.string() + ": " + what);
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::filesystem::path& path, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key))
            config_fail(path, "unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_field(const json& obj, const char* key, const std::filesystem::path& path,
            const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        config_fail(path, "bad or missing '" + std::string(key) + "' in " + where);
    }
}

FrontEndConfig parse_front_end(const json& doc, const std::filesystem::path& path) {
    FrontEndConfig cfg;
    if (!doc.is_object()) config_fail(path, "'front_end' must be an object");
    require_keys(doc,
                 {"type", "subpatch_size", "stride", "inlier_tol", "detector_threshold",
                  "max_keypoints"},
                 path, "front_end");
    const std::string type = get_field<std::string>(doc, "type", path, "front_end");
    if (type == "ncc") {
        cfg.type = FrontEndType::ncc;
    } else if (type == "feature") {
        cfg.type = FrontEndType::feature;
        if (doc.contains("subpatch_size"))
            cfg.feature.subpatch_size = get_field<int>(doc, "subpatch_size", path, "front_end");
        if (doc.contains("stride"))
            cfg.feature.stride = get_field<int>(doc, "stride", path, "front_end");
        if (doc.contains("inlier_tol"))
            cfg.feature.inlier_tol = get_field<double>(doc, "inlier_tol", path, "front_end");
        if (doc.contains("detector_threshold"))
            cfg.feature.detector_threshold =
                get_field<double>(doc, "detector_threshold", path, "front_end");
        if (doc.contains("max_keypoints"))
            cfg.feature.max_keypoints = get_field<int>(doc, "max_keypoints", path, "front_end");
    } else {
        config_fail(path, "front_end.type must be 'ncc' or 'feature'");
    }
    return cfg;
}

SurfaceSpec parse_surface(const json& doc, const std::filesystem::path& path) {
    if (!doc.is_object()) config_fail(path, "'surface' must be an object");
    require_keys(doc, {"width", "height", "texture_scale", "uniqueness", "seed"}, path,
                 "surface");
    SurfaceSpec spec;
    if (doc.contains("width")) spec.width = get_field<int>(doc, "width", path, "surface");
    if (doc.contains("height")) spec.height = get_field<int>(doc, "height", path, "surface");
    if (doc.contains("texture_scale"))
        spec.texture_scale = get_field<int>(doc, "texture_scale", path, "surface");
    if (doc.contains("uniqueness"))
        spec.uniqueness = get_field<double>(doc, "uniqueness", path, "surface");
    if (doc.contains("seed"))
        spec.seed = get_field<std::uint64_t>(doc, "seed", path, "surface");
    if (spec.width < 64 || spec.height < 64)
        config_fail(path, "surface dimensions must be >= 64");
    if (spec.texture_scale < 1) config_fail(path, "surface.texture_scale must be >= 1");
    if (spec.uniqueness < 0.0 || spec.uniqueness > 1.0)
        config_fail(path, "surface.uniqueness must be in [0, 1]");
    return spec;
}

PerturbSpec parse_perturb(const json& doc, const std::filesystem::path& path) {
    if (!doc.is_object()) config_fail(path, "'perturb' must be an object");
    require_keys(doc,
                 {"noise_sigma", "brightness_shift", "contrast_gain", "occlusion_count",
                  "occlusion_size", "seed"},
                 path, "perturb");
    PerturbSpec spec;
    if (doc.contains("noise_sigma"))
        spec.noise_sigma = get_field<double>(doc, "noise_sigma", path, "perturb");
    if (doc.contains("brightness_shift"))
        spec.brightness_shift = get_field<double>(doc, "brightness_shift", path, "perturb");
    if (doc.contains("contrast_gain"))
        spec.contrast_gain = get_field<double>(doc, "contrast_gain", path, "perturb");
    if (doc.contains("occlusion_count"))
        spec.occlusion_count = get_field<int>(doc, "occlusion_count", path, "perturb");
    if (doc.contains("occlusion_size"))
        spec.occlusion_size = get_field<int>(doc, "occlusion_size", path, "perturb");
    if (doc.contains("seed"))
        spec.seed = get_field<std::uint64_t>(doc, "seed", path, "perturb");
    if (spec.noise_sigma < 0.0) config_fail(path, "perturb.noise_sigma must be >= 0");
    if (spec.occlusion_count < 0 || spec.occlusion_size < 0)
        config_fail(path, "perturb occlusion fields must be >= 0");
    return spec;
}

SynthPairSpec parse_synth_pair(const json& doc, const std::filesystem::path& path,
                               std::size_t index) {
    if (!doc.is_object()) config_fail(path, "synthetic entries must be objects");
    require_keys(doc, {"name", "surface", "perturb"}, path, "synthetic entry");
    SynthPairSpec spec;
    spec.name = doc.value("name", "synthetic-" + std::to_string(index + 1));
    if (doc.contains("surface")) spec.surface = parse_surface(doc["surface"], path);
    spec.perturb = doc.contains("perturb") ? parse_perturb(doc["perturb"], path)
                                           : PerturbSpec{};
    return spec;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_object()) config_fail(path, "config root must be a JSON object");
    require_keys(doc, {"calibration", "evaluation", "data"}, path, "config root");

    RunConfig cfg;

    if (doc.contains("calibration")) {
        const json& cal = doc["calibration"];
        if (!cal.is_object()) config_fail(path, "'calibration' must be an object");
        require_keys(cal,
                     {"radii", "n_samples", "ovl_threshold", "match_tol", "rng_seed",
                      "front_end", "max_impostors_per_sample"},
                     path, "calibration");
        if (cal.contains("radii"))
            cfg.calibration.radii = get_field<std::vector<int>>(cal, "radii", path, "calibration");
        if (cal.contains("n_samples"))
            cfg.calibration.n_samples = get_field<int>(cal, "n_samples", path, "calibration");
        if (cal.contains("ovl_threshold"))
            cfg.calibration.ovl_threshold =
                get_field<double>(cal, "ovl_threshold", path, "calibration");
        if (cal.contains("match_tol"))
            cfg.calibration.match_tol = get_field<int>(cal, "match_tol", path, "calibration");
        if (cal.contains("rng_seed"))
            cfg.calibration.rng_seed =
                get_field<std::uint64_t>(cal, "rng_seed", path, "calibration");
        if (cal.contains("front_end"))
            cfg.calibration.front_end = parse_front_end(cal["front_end"], path);
        if (cal.contains("max_impostors_per_sample"))
            cfg.calibration.max_impostors_per_sample =
                get_field<std::size_t>(cal, "max_impostors_per_sample", path, "calibration");
    }

    cfg.evaluation.match_tol = cfg.calibration.match_tol;
    if (doc.contains("evaluation")) {
        const json& ev = doc["evaluation"];
        if (!ev.is_object()) config_fail(path, "'evaluation' must be an object");
        require_keys(ev, {"radii", "m_samples", "match_tol"}, path, "evaluation");
        if (ev.contains("radii"))
            cfg.evaluation.radii = get_field<std::vector<int>>(ev, "radii", path, "evaluation");
        if (ev.contains("m_samples"))
            cfg.evaluation.m_samples = get_field<int>(ev, "m_samples", path, "evaluation");
        if (ev.contains("match_tol"))
            cfg.evaluation.match_tol = get_field<int>(ev, "match_tol", path, "evaluation");
    }

    if (doc.contains("data")) {
        const json& data = doc["data"];
        if (!data.is_object()) config_fail(path, "'data' must be an object");
        require_keys(data, {"manifests", "synthetic"}, path, "data");
        if (data.contains("manifests")) {
            if (!data["manifests"].is_array())
                config_fail(path, "'data.manifests' must be an array of paths");
            for (const json& m : data["manifests"]) {
                if (!m.is_string()) config_fail(path, "'data.manifests' entries must be strings");
                std::filesystem::path p = m.get<std::string>();
                cfg.manifests.push_back(p.is_absolute() ? p : path.parent_path() / p);
            }
        }
        if (data.contains("synthetic")) {
            if (!data["synthetic"].is_array())
                config_fail(path, "'data.synthetic' must be an array");
            std::size_t i = 0;
            for (const json& s : data["synthetic"])
                cfg.synthetic.push_back(parse_synth_pair(s, path, i++));
        }
    }

    try {
        cfg.calibration.validate();
        cfg.evaluation.validate();
    } catch (const Error& e) {
        config_fail(path, e.what());
    }
    return cfg;
}

SynthPairSpec load_synth_spec(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_object()) config_fail(path, "synth spec root must be a JSON object");
    require_keys(doc, {"name", "surface", "perturb"}, path, "synth spec");
    return parse_synth_pair(doc, path, 0);
}

}  // namespace covcal
