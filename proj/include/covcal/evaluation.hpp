#pragma once

#include "covcal/calibration.hpp"
#include "covcal/datasets.hpp"
#include "covcal/frontend.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace covcal {

struct RadiusEval {
    int radius = 0;
    double recall = 0.0;
    double mean_time_s = 0.0;
    double m_metric = 0.0;
};

struct EvalConfig {
    std::vector<int> radii{2, 4, 8, 16, 32};
    int m_samples = 1000;  // validation samples
    int match_tol = 5;

    void validate() const;
};

struct EvalReport {
    std::string pair_name;
    std::vector<RadiusEval> per_radius;
    int p_g = 0;                          // smallest radius reaching 95% of max recall
    double selected_radius = 0.0;         // from calibration, possibly fractional
    int selected_radius_evaluated = 0;    // rounded to the evaluated grid
    double m_at_selected = 0.0;
};

struct RecallResult {
    double recall = 0.0;
    double mean_time_s = 0.0;
};

// Recall over m_samples validation queries (disjoint from the calibration
// samples of the same seed): a sample is a true match when the argmax
// placement lies within match_tol (Chebyshev) of the true center. Timing is
// measured on a small serialized batch of localize calls, median of three
// repetitions.
RecallResult recall_at_radius(const AlignedPair& pair, int radius, int m_samples,
                              int match_tol, const FrontEnd& front_end,
                              std::uint64_t seed);

// Smallest evaluated radius whose recall reaches 95% of the maximum.
int ground_truth_optimal_radius(const std::vector<RadiusEval>& per_radius);

// Max-recall-to-computation-efficiency: 1 - |p_i - p_g| / max_n |p_n - p_g|,
// or 1 when every evaluated radius equals p_g.
double m_metric(double p_i, double p_g, std::span<const int> all_radii);

// Evaluates the configured radii plus the calibration selection, fills the
// per-radius metric values, and reports the metric at the selected radius.
EvalReport evaluate(const AlignedPair& pair, const CalibrationOutcome& outcome,
                    const EvalConfig& eval_cfg);

}  // namespace covcal
