#pragma once

#include "covcal/datasets.hpp"
#include "covcal/frontend.hpp"
#include "covcal/stats.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace covcal {

enum class FrontEndType { ncc, feature };

struct FrontEndConfig {
    FrontEndType type = FrontEndType::ncc;
    FeatureConfig feature;
};

std::unique_ptr<FrontEnd> make_front_end(const FrontEndConfig& cfg);
const char* front_end_type_name(FrontEndType type);

struct CalibrationConfig {
    std::vector<int> radii{2, 3, 4, 6, 8, 11, 15, 20, 27, 36, 48, 60};
    int n_samples = 200;            // calibration samples per radius
    double ovl_threshold = 0.005;   // required OVL below which coverage is optimal
    int match_tol = 5;              // true-match distance threshold (Chebyshev px)
    std::uint64_t rng_seed = 1;
    FrontEndConfig front_end;
    std::size_t max_impostors_per_sample = 50000;

    void validate() const;  // throws config errors
};

// Scores harvested from one query sample: the best score near the true
// center plus the impostor population everywhere else.
struct ScoreSample {
    double truth_score = 0.0;
    std::vector<double> impostor_scores;
};

struct OvlPoint {
    int radius = 0;
    double ovl = 0.0;
};

struct OvlCurve {
    std::vector<OvlPoint> points;
};

// Diagnostic summary of the pooled score populations at one radius.
struct RadiusScoreSummary {
    int radius = 0;
    NormalFit truth_fit;
    NormalFit impostor_fit;
};

struct CalibrationOutcome {
    double selected_radius = 0.0;  // may be fractional (interpolated crossing)
    OvlCurve curve;
    CalibrationConfig config;
    std::vector<RadiusScoreSummary> per_radius;
    std::string pair_name;
    std::vector<CalibrationOutcome> per_pair;  // populated by calibrate_multi
};

// Runs localization for n_samples seeded query patches at one radius and
// splits each resulting score field at the match tolerance: truth = best
// score within match_tol of the true center, impostors = scores farther out
// (uniformly subsampled to max_impostors_per_sample).
std::vector<ScoreSample> harvest_scores(const AlignedPair& pair, int radius,
                                        const CalibrationConfig& cfg);

// Fits one normal to the truth scores and one to the pooled impostors, then
// returns their overlapping coefficient over the front-end bounds.
double ovl_for_radius(const std::vector<ScoreSample>& samples, ScoreBounds bounds);

// Operating-point selection: linear interpolation at the first crossing of
// the threshold when scanning radii in increasing order; the smallest radius
// when the curve starts at or below the threshold; the largest tested radius
// when the curve never reaches it.
double select_operating_point(const OvlCurve& curve, double ovl_threshold);

CalibrationOutcome calibrate(const AlignedPair& pair, const CalibrationConfig& cfg);

// Calibrates each pair independently and averages the selected radii,
// rounded half-up to the nearest integer.
CalibrationOutcome calibrate_multi(const std::vector<AlignedPair>& pairs,
                                   const CalibrationConfig& cfg);

double round_half_up(double v);
double combine_selected_radii(const std::vector<double>& radii);

}  // namespace covcal
