#include "covcal/calibration.hpp"

#include "covcal/error.hpp"
#include "covcal/log.hpp"
#include "covcal/parallel.hpp"
#include "covcal/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covcal {

std::unique_ptr<FrontEnd> make_front_end(const FrontEndConfig& cfg) {
    switch (cfg.type) {
        case FrontEndType::ncc: return std::make_unique<NccFrontEnd>();
        case FrontEndType::feature: return std::make_unique<FeatureFrontEnd>(cfg.feature);
    }
    throw Error(ErrorKind::config, "make_front_end: unknown front-end type");
}

const char* front_end_type_name(FrontEndType type) {
    switch (type) {
        case FrontEndType::ncc: return "ncc";
        case FrontEndType::feature: return "feature";
    }
    return "?";
}

void CalibrationConfig::validate() const {
    if (radii.empty())
        throw Error(ErrorKind::config, "calibration: radii list must not be empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1)
            throw Error(ErrorKind::config, "calibration: radii must be >= 1");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw Error(ErrorKind::config, "calibration: radii must be strictly increasing");
    }
    if (n_samples < 2)
        throw Error(ErrorKind::config, "calibration: n_samples must be >= 2");
    if (!(ovl_threshold > 0.0 && ovl_threshold < 1.0))
        throw Error(ErrorKind::config, "calibration: ovl_threshold must be in (0, 1)");
    if (match_tol < 0)
        throw Error(ErrorKind::config, "calibration: match_tol must be >= 0");
    if (max_impostors_per_sample < 1)
        throw Error(ErrorKind::config, "calibration: max_impostors_per_sample must be >= 1");
    make_front_end(front_end);  // validates front-end parameters
}

namespace {

// Splits one score field at the match tolerance around the true center.
ScoreSample split_scores(const ScoreField& field, PixelPos true_center, int match_tol,
                         std::size_t max_impostors, Rng& subsample_rng) {
    ScoreSample sample;
    bool have_truth = false;
    sample.impostor_scores.reserve(field.scores.size());
    for (int j = 0; j < field.height; ++j) {
        for (int i = 0; i < field.width; ++i) {
            const double s = field.at(i, j);
            if (chebyshev(field.center_of(i, j), true_center) <= match_tol) {
                if (!have_truth || s > sample.truth_score) {
                    sample.truth_score = s;
                    have_truth = true;
                }
            } else {
                sample.impostor_scores.push_back(s);
            }
        }
    }
    if (!have_truth)
        throw Error(ErrorKind::geometry, "harvest_scores: true center outside the score field");
    if (sample.impostor_scores.empty())
        throw Error(ErrorKind::geometry,
                    "harvest_scores: map too small to produce impostor placements");

    if (sample.impostor_scores.size() > max_impostors) {
        subsample_rng.partial_shuffle(sample.impostor_scores, max_impostors);
        sample.impostor_scores.resize(max_impostors);
    }
    return sample;
}

}  // namespace

std::vector<ScoreSample> harvest_scores(const AlignedPair& pair, int radius,
                                        const CalibrationConfig& cfg) {
    const auto front_end = make_front_end(cfg.front_end);
    if (!front_end->radius_admissible(radius))
        throw Error(ErrorKind::constraint,
                    "harvest_scores: radius " + std::to_string(radius) +
                        " not admissible for front-end " + front_end->name());

    const SamplePlan plan =
        plan_samples(pair, radius, static_cast<std::size_t>(cfg.n_samples), cfg.rng_seed,
                     SamplePurpose::calibration, front_end->sample_grid_step());

    std::vector<ScoreSample> samples(plan.centers.size());
    parallel_for(plan.centers.size(), [&](std::size_t k) {
        const PixelPos center = plan.centers[k];
        const Patch patch = extract_patch(pair.query, center, radius);
        const ScoreField field = front_end->score_field(patch, pair.reference);
        Rng subsample_rng(mix_seed({cfg.rng_seed, 0x696d70ull,
                                    static_cast<std::uint64_t>(radius), k}));
        samples[k] = split_scores(field, center, cfg.match_tol,
                                  cfg.max_impostors_per_sample, subsample_rng);
    });
    return samples;
}

double ovl_for_radius(const std::vector<ScoreSample>& samples, ScoreBounds bounds) {
    if (samples.size() < 2)
        throw Error(ErrorKind::fit, "ovl_for_radius: need at least 2 samples");

    std::vector<double> truth;
    truth.reserve(samples.size());
    std::size_t impostor_count = 0;
    for (const ScoreSample& s : samples) impostor_count += s.impostor_scores.size();
    std::vector<double> impostors;
    impostors.reserve(impostor_count);
    for (const ScoreSample& s : samples) {
        truth.push_back(s.truth_score);
        impostors.insert(impostors.end(), s.impostor_scores.begin(),
                         s.impostor_scores.end());
    }

    const NormalFit truth_fit = fit_normal(truth);
    const NormalFit impostor_fit = fit_normal(impostors);
    return ovl_weitzman(truth_fit, impostor_fit, bounds.lo, bounds.hi);
}

double select_operating_point(const OvlCurve& curve, double ovl_threshold) {
    if (curve.points.empty())
        throw Error(ErrorKind::input, "select_operating_point: empty curve");

    if (curve.points.front().ovl <= ovl_threshold)
        return curve.points.front().radius;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const OvlPoint& a = curve.points[i];
        const OvlPoint& b = curve.points[i + 1];
        if (a.ovl > ovl_threshold && ovl_threshold >= b.ovl) {
            return a.radius +
                   (b.radius - a.radius) * (ovl_threshold - a.ovl) / (b.ovl - a.ovl);
        }
    }
    return curve.points.back().radius;  // never crossed: largest coverage tested
}

CalibrationOutcome calibrate(const AlignedPair& pair, const CalibrationConfig& cfg) {
    cfg.validate();
    const auto front_end = make_front_end(cfg.front_end);

    CalibrationOutcome outcome;
    outcome.config = cfg;
    outcome.pair_name = pair.name;

    for (int radius : cfg.radii) {
        std::vector<ScoreSample> samples;
        try {
            samples = harvest_scores(pair, radius, cfg);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::geometry || e.kind() == ErrorKind::constraint) {
                log_warn("calibrate: dropping radius " + std::to_string(radius) + " on '" +
                         pair.name + "': " + e.what());
                continue;
            }
            throw;
        }
        const double ovl = ovl_for_radius(samples, front_end->bounds());
        outcome.curve.points.push_back({radius, ovl});

        std::vector<double> truth;
        std::vector<double> impostors;
        for (const ScoreSample& s : samples) {
            truth.push_back(s.truth_score);
            impostors.insert(impostors.end(), s.impostor_scores.begin(),
                             s.impostor_scores.end());
        }
        outcome.per_radius.push_back(
            {radius, fit_normal(truth), fit_normal(impostors)});
        log_info("calibrate '" + pair.name + "': radius " + std::to_string(radius) +
                 " OVL " + std::to_string(ovl));
    }

    if (outcome.curve.points.empty())
        throw Error(ErrorKind::geometry,
                    "calibrate: no radius in the sweep fits pair '" + pair.name + "'");

    outcome.selected_radius = select_operating_point(outcome.curve, cfg.ovl_threshold);
    return outcome;
}

double round_half_up(double v) { return std::floor(v + 0.5); }

double combine_selected_radii(const std::vector<double>& radii) {
    if (radii.empty())
        throw Error(ErrorKind::input, "combine_selected_radii: empty input");
    const double mean =
        std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(radii.size());
    return round_half_up(mean);
}

CalibrationOutcome calibrate_multi(const std::vector<AlignedPair>& pairs,
                                   const CalibrationConfig& cfg) {
    if (pairs.empty())
        throw Error(ErrorKind::input, "calibrate_multi: need at least one pair");
    if (pairs.size() == 1) return calibrate(pairs.front(), cfg);

    CalibrationOutcome combined;
    combined.config = cfg;
    combined.pair_name = "multi";

    std::vector<double> selected;
    selected.reserve(pairs.size());
    for (const AlignedPair& pair : pairs) {
        combined.per_pair.push_back(calibrate(pair, cfg));
        selected.push_back(combined.per_pair.back().selected_radius);
    }
    combined.selected_radius = combine_selected_radii(selected);
    return combined;
}

}  // namespace covcal
