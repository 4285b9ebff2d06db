#include "covcal/datasets.hpp"

#include "covcal/error.hpp"
#include "covcal/log.hpp"
#include "covcal/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace covcal {

namespace {

using nlohmann::json;

[[noreturn]] void manifest_fail(const std::filesystem::path& path, const std::string& what) {
    throw Error(ErrorKind::config, "load_pair: " + what + " (" + path.string() + ")");
}

// Crops both images to the region where they overlap under a (dx, dy) shift
// of the query relative to the reference.
void crop_to_overlap(GrayImage& ref, GrayImage& qry, int dx, int dy) {
    const int ref_x0 = std::max(dx, 0);
    const int ref_y0 = std::max(dy, 0);
    const int qry_x0 = std::max(-dx, 0);
    const int qry_y0 = std::max(-dy, 0);
    const int w = std::min(ref.width - ref_x0, qry.width - qry_x0);
    const int h = std::min(ref.height - ref_y0, qry.height - qry_y0);
    if (w < 1 || h < 1)
        throw Error(ErrorKind::geometry, "load_pair: no overlap between the aligned images");

    auto crop = [&](const GrayImage& src, int x0, int y0) {
        GrayImage out(w, h);
        for (int y = 0; y < h; ++y) {
            const double* s = src.row(y0 + y) + x0;
            std::copy(s, s + w, out.row(y));
        }
        return out;
    };
    ref = crop(ref, ref_x0, ref_y0);
    qry = crop(qry, qry_x0, qry_y0);
}

}  // namespace

AlignedPair load_pair(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorKind::io, "load_pair: cannot open " + manifest_path.string());

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        manifest_fail(manifest_path, std::string("malformed JSON: ") + e.what());
    }

    if (!doc.is_object()) manifest_fail(manifest_path, "manifest must be a JSON object");
    for (const char* key : {"name", "reference", "query", "preprocess"}) {
        if (!doc.contains(key))
            manifest_fail(manifest_path, std::string("missing required key '") + key + "'");
    }
    if (!doc["reference"].is_string() || !doc["query"].is_string())
        manifest_fail(manifest_path, "'reference' and 'query' must be image paths");

    PreprocessConfig pre;
    const json& p = doc["preprocess"];
    if (!p.is_object() || !p.contains("target_width") ||
        !p["target_width"].is_number_integer())
        manifest_fail(manifest_path, "'preprocess.target_width' (integer) is required");
    pre.target_width = p["target_width"].get<int>();
    if (p.contains("patchnorm_radius")) {
        if (!p["patchnorm_radius"].is_number_integer())
            manifest_fail(manifest_path, "'preprocess.patchnorm_radius' must be an integer");
        pre.patchnorm_radius = p["patchnorm_radius"].get<int>();
    }
    if (pre.target_width < 1)
        manifest_fail(manifest_path, "'preprocess.target_width' must be >= 1");
    if (pre.patchnorm_radius && *pre.patchnorm_radius < 1)
        manifest_fail(manifest_path, "'preprocess.patchnorm_radius' must be >= 1");

    int dx = 0, dy = 0;
    if (doc.contains("offset")) {
        const json& off = doc["offset"];
        if (!off.is_array() || off.size() != 2 || !off[0].is_number_integer() ||
            !off[1].is_number_integer())
            manifest_fail(manifest_path, "'offset' must be [dx, dy] integers");
        dx = off[0].get<int>();
        dy = off[1].get<int>();
    }

    const auto base = manifest_path.parent_path();
    auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : base / p;
    };

    AlignedPair pair;
    pair.name = doc["name"].is_string() ? doc["name"].get<std::string>() : std::string();
    if (pair.name.empty()) manifest_fail(manifest_path, "'name' must be a nonempty string");
    pair.source_offset = {dx, dy};
    if (doc.contains("notes") && doc["notes"].is_string())
        pair.provenance = doc["notes"].get<std::string>();

    pair.reference = load_image(resolve(doc["reference"].get<std::string>()));
    pair.query = load_image(resolve(doc["query"].get<std::string>()));
    crop_to_overlap(pair.reference, pair.query, dx, dy);

    pair.reference = preprocess(pair.reference, pre);
    pair.query = preprocess(pair.query, pre);
    log_debug("loaded pair '" + pair.name + "' " + std::to_string(pair.reference.width) +
              "x" + std::to_string(pair.reference.height));
    return pair;
}

std::size_t admissible_center_count(const AlignedPair& pair, int radius, int grid_step) {
    if (radius < 0 || grid_step < 1) return 0;
    const int span_x = pair.reference.width - 2 * radius;
    const int span_y = pair.reference.height - 2 * radius;
    if (span_x <= 0 || span_y <= 0) return 0;
    const std::size_t nx = static_cast<std::size_t>((span_x - 1) / grid_step) + 1;
    const std::size_t ny = static_cast<std::size_t>((span_y - 1) / grid_step) + 1;
    return nx * ny;
}

SamplePlan plan_samples(const AlignedPair& pair, int radius, std::size_t n,
                        std::uint64_t seed, SamplePurpose purpose, int grid_step) {
    if (grid_step < 1) throw Error(ErrorKind::input, "plan_samples: grid_step must be >= 1");
    if (pair.reference.width != pair.query.width ||
        pair.reference.height != pair.query.height)
        throw Error(ErrorKind::input, "plan_samples: pair maps differ in size");

    const std::size_t total = admissible_center_count(pair, radius, grid_step);
    if (total == 0)
        throw Error(ErrorKind::geometry,
                    "plan_samples: no admissible centers for radius " + std::to_string(radius));
    if (n > total)
        throw Error(ErrorKind::geometry,
                    "plan_samples: requested " + std::to_string(n) + " samples but only " +
                        std::to_string(total) + " centers admit radius " +
                        std::to_string(radius));

    const int span_x = pair.reference.width - 2 * radius;
    const std::size_t nx = static_cast<std::size_t>((span_x - 1) / grid_step) + 1;

    // One permutation per (seed, radius, grid); calibration consumes the
    // front, validation the back, so the two purposes cannot collide.
    std::vector<std::uint32_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = static_cast<std::uint32_t>(i);
    Rng rng(mix_seed({seed, 0x706c616eull, static_cast<std::uint64_t>(radius),
                      static_cast<std::uint64_t>(grid_step)}));
    rng.shuffle(order);

    SamplePlan plan;
    plan.seed = seed;
    plan.purpose = purpose;
    plan.centers.reserve(n);
    const std::size_t begin = purpose == SamplePurpose::calibration ? 0 : total - n;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = order[begin + k];
        const int gx = static_cast<int>(idx % nx);
        const int gy = static_cast<int>(idx / nx);
        plan.centers.push_back({radius + gx * grid_step, radius + gy * grid_step});
    }
    return plan;
}

}  // namespace covcal
