#include "covcal/calibration.hpp"
#include "covcal/error.hpp"
#include "covcal/evaluation.hpp"
#include "covcal/frontend.hpp"
#include "covcal/image.hpp"
#include "covcal/parallel.hpp"
#include "covcal/report.hpp"
#include "covcal/stats.hpp"
#include "covcal/synthdata.hpp"

#include <json.hpp>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using json = nlohmann::json;
using namespace covcal;

namespace {

GrayImage image_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D array (height, width)");
    GrayImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(img.pixels.data(), arr.data(), sizeof(double) * img.pixels.size());
    return img;
}

py::array_t<double> array_from_image(const GrayImage& img) {
    py::array_t<double> arr({img.height, img.width});
    std::memcpy(arr.mutable_data(), img.pixels.data(), sizeof(double) * img.pixels.size());
    return arr;
}

py::array_t<double> array_from_field(const ScoreField& field) {
    py::array_t<double> arr({field.height, field.width});
    std::memcpy(arr.mutable_data(), field.scores.data(), sizeof(double) * field.scores.size());
    return arr;
}

Patch patch_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    GrayImage pixels = image_from_array(arr);
    if (pixels.width != pixels.height || pixels.width % 2 == 0)
        throw py::value_error("patch must be square with odd side");
    const int radius = pixels.width / 2;
    return Patch{std::move(pixels), {radius, radius}, radius};
}

AlignedPair pair_from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> ref,
                             py::array_t<double, py::array::c_style | py::array::forcecast> qry,
                             const std::string& name) {
    AlignedPair pair;
    pair.reference = image_from_array(ref);
    pair.query = image_from_array(qry);
    pair.name = name;
    if (pair.reference.width != pair.query.width ||
        pair.reference.height != pair.query.height)
        throw py::value_error("reference and query must have identical shapes");
    return pair;
}

}  // namespace

PYBIND11_MODULE(_covcal, m) {
    m.doc() = "Sensor-coverage calibration for surface-based visual localization";

    py::register_exception<Error>(m, "CovcalError");

    m.def("set_thread_count", &set_thread_count, py::arg("n"),
          "Cap worker threads (0 restores the hardware default)");

    // imaging
    m.def(
        "load_image",
        [](const std::string& path) { return array_from_image(load_image(path)); },
        py::arg("path"));
    m.def(
        "save_pgm",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> img,
           const std::string& path) { save_pgm(image_from_array(img), path); },
        py::arg("image"), py::arg("path"));
    m.def(
        "downsample_to_width",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> img, int width) {
            return array_from_image(downsample_to_width(image_from_array(img), width));
        },
        py::arg("image"), py::arg("target_width"));
    m.def(
        "patch_normalize",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> img, int radius) {
            return array_from_image(patch_normalize(image_from_array(img), radius));
        },
        py::arg("image"), py::arg("radius"));

    // synthetic data
    m.def(
        "generate_surface",
        [](int width, int height, int texture_scale, double uniqueness, std::uint64_t seed) {
            return array_from_image(
                generate_surface({width, height, texture_scale, uniqueness, seed}));
        },
        py::arg("width") = 256, py::arg("height") = 256, py::arg("texture_scale") = 8,
        py::arg("uniqueness") = 1.0, py::arg("seed") = 1);
    m.def(
        "perturb_surface",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> surface,
           double noise_sigma, double brightness_shift, double contrast_gain,
           int occlusion_count, int occlusion_size, std::uint64_t seed) {
            const AlignedPair pair = make_aligned_pair(
                image_from_array(surface), {noise_sigma, brightness_shift, contrast_gain,
                                            occlusion_count, occlusion_size, seed});
            return array_from_image(pair.query);
        },
        py::arg("surface"), py::arg("noise_sigma") = 0.0, py::arg("brightness_shift") = 0.0,
        py::arg("contrast_gain") = 1.0, py::arg("occlusion_count") = 0,
        py::arg("occlusion_size") = 0, py::arg("seed") = 1);

    // front-ends
    m.def(
        "extract_patch",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> map, int x, int y,
           int radius) {
            return array_from_image(extract_patch(image_from_array(map), {x, y}, radius).pixels);
        },
        py::arg("map"), py::arg("x"), py::arg("y"), py::arg("radius"));
    m.def(
        "ncc_score_field",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> patch,
           py::array_t<double, py::array::c_style | py::array::forcecast> map) {
            return array_from_field(ncc_score_field(patch_from_array(patch),
                                                    image_from_array(map)));
        },
        py::arg("patch"), py::arg("map"),
        "Dense zero-normalized cross-correlation of a square odd-sided patch");
    m.def(
        "localize_ncc",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> patch,
           py::array_t<double, py::array::c_style | py::array::forcecast> map) {
            const NccFrontEnd fe;
            const LocalizeResult r =
                localize(fe, patch_from_array(patch), image_from_array(map));
            return py::make_tuple(r.best.x, r.best.y, r.best_score);
        },
        py::arg("patch"), py::arg("map"),
        "Best placement center (x, y, score) of a patch in a map");

    // statistics
    m.def(
        "fit_normal",
        [](const std::vector<double>& samples) {
            const NormalFit f = fit_normal(samples);
            return py::make_tuple(f.mean, f.std, f.n);
        },
        py::arg("samples"), "Returns (mean, population_std, n)");
    m.def(
        "ovl_weitzman",
        [](double p_mean, double p_std, double q_mean, double q_std, double k0, double k1) {
            return ovl_weitzman({p_mean, p_std, 2}, {q_mean, q_std, 2}, k0, k1);
        },
        py::arg("p_mean"), py::arg("p_std"), py::arg("q_mean"), py::arg("q_std"),
        py::arg("k0") = -1.0, py::arg("k1") = 1.0,
        "Overlapping coefficient of two normal fits over the score bounds");

    // calibration / evaluation
    m.def(
        "select_operating_point",
        [](const std::vector<int>& radii, const std::vector<double>& ovls, double threshold) {
            if (radii.size() != ovls.size())
                throw py::value_error("radii and ovls must have equal length");
            OvlCurve curve;
            for (std::size_t i = 0; i < radii.size(); ++i)
                curve.points.push_back({radii[i], ovls[i]});
            return select_operating_point(curve, threshold);
        },
        py::arg("radii"), py::arg("ovls"), py::arg("threshold"));
    m.def(
        "m_metric",
        [](double p_i, double p_g, const std::vector<int>& radii) {
            return m_metric(p_i, p_g, radii);
        },
        py::arg("p_i"), py::arg("p_g"), py::arg("radii"));

    m.def(
        "calibrate_json",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> reference,
           py::array_t<double, py::array::c_style | py::array::forcecast> query,
           const std::string& name, const std::string& config_json) {
            const AlignedPair pair = pair_from_arrays(reference, query, name);
            const CalibrationConfig cfg =
                calibration_config_from_json(json::parse(config_json));
            return calibration_to_json(calibrate(pair, cfg)).dump();
        },
        py::arg("reference"), py::arg("query"), py::arg("name"), py::arg("config_json"));
    m.def(
        "evaluate_json",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> reference,
           py::array_t<double, py::array::c_style | py::array::forcecast> query,
           const std::string& name, const std::string& calibration_json,
           const std::string& eval_json) {
            const AlignedPair pair = pair_from_arrays(reference, query, name);
            const CalibrationOutcome outcome =
                calibration_from_json(json::parse(calibration_json));
            const EvalConfig cfg = eval_config_from_json(json::parse(eval_json));
            return eval_report_to_json(evaluate(pair, outcome, cfg)).dump();
        },
        py::arg("reference"), py::arg("query"), py::arg("name"),
        py::arg("calibration_json"), py::arg("eval_json"));

#ifdef COVCAL_VERSION
    m.attr("__version__") = COVCAL_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
