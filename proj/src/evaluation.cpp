#include "covcal/evaluation.hpp"

#include "covcal/error.hpp"
#include "covcal/log.hpp"
#include "covcal/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace covcal {

void EvalConfig::validate() const {
    if (radii.empty()) throw Error(ErrorKind::config, "evaluation: radii list must not be empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1) throw Error(ErrorKind::config, "evaluation: radii must be >= 1");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw Error(ErrorKind::config, "evaluation: radii must be strictly increasing");
    }
    if (m_samples < 1) throw Error(ErrorKind::config, "evaluation: m_samples must be >= 1");
    if (match_tol < 0) throw Error(ErrorKind::config, "evaluation: match_tol must be >= 0");
}

namespace {

double timed_batch_s(const AlignedPair& pair, const FrontEnd& front_end, int radius,
                     std::span<const PixelPos> centers) {
    const auto start = std::chrono::steady_clock::now();
    for (const PixelPos c : centers) {
        const Patch patch = extract_patch(pair.query, c, radius);
        volatile double sink = localize(front_end, patch, pair.reference).best_score;
        (void)sink;
    }
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

RecallResult recall_at_radius(const AlignedPair& pair, int radius, int m_samples,
                              int match_tol, const FrontEnd& front_end,
                              std::uint64_t seed) {
    if (m_samples < 1)
        throw Error(ErrorKind::input, "recall_at_radius: m_samples must be >= 1");
    if (!front_end.radius_admissible(radius))
        throw Error(ErrorKind::constraint,
                    "recall_at_radius: radius " + std::to_string(radius) +
                        " not admissible for front-end " + front_end.name());

    const SamplePlan plan =
        plan_samples(pair, radius, static_cast<std::size_t>(m_samples), seed,
                     SamplePurpose::validation, front_end.sample_grid_step());

    std::vector<unsigned char> hits(plan.centers.size(), 0);
    parallel_for(plan.centers.size(), [&](std::size_t k) {
        const PixelPos center = plan.centers[k];
        const Patch patch = extract_patch(pair.query, center, radius);
        const LocalizeResult result = localize(front_end, patch, pair.reference);
        hits[k] = chebyshev(result.best, center) <= match_tol ? 1 : 0;
    });
    std::size_t matches = 0;
    for (unsigned char h : hits) matches += h;

    // Single-threaded timing batch, median of three repetitions.
    const std::size_t batch =
        std::min<std::size_t>(plan.centers.size(), 12);
    const std::span<const PixelPos> timing_centers(plan.centers.data(), batch);
    double t0 = timed_batch_s(pair, front_end, radius, timing_centers);
    double t1 = timed_batch_s(pair, front_end, radius, timing_centers);
    double t2 = timed_batch_s(pair, front_end, radius, timing_centers);
    const double median = std::max(std::min(t0, t1), std::min(std::max(t0, t1), t2));

    RecallResult result;
    result.recall = static_cast<double>(matches) / static_cast<double>(plan.centers.size());
    result.mean_time_s = median / static_cast<double>(batch);
    return result;
}

int ground_truth_optimal_radius(const std::vector<RadiusEval>& per_radius) {
    if (per_radius.empty())
        throw Error(ErrorKind::input, "ground_truth_optimal_radius: empty evaluation");
    double max_recall = 0.0;
    for (const RadiusEval& e : per_radius) max_recall = std::max(max_recall, e.recall);

    int best = per_radius.front().radius;
    bool found = false;
    for (const RadiusEval& e : per_radius) {
        if (e.recall >= 0.95 * max_recall && (!found || e.radius < best)) {
            best = e.radius;
            found = true;
        }
    }
    return best;
}

double m_metric(double p_i, double p_g, std::span<const int> all_radii) {
    if (all_radii.empty()) throw Error(ErrorKind::input, "m_metric: empty radius list");
    double max_dist = 0.0;
    for (int r : all_radii) max_dist = std::max(max_dist, std::abs(r - p_g));
    if (max_dist == 0.0) return 1.0;
    return 1.0 - std::abs(p_i - p_g) / max_dist;
}

EvalReport evaluate(const AlignedPair& pair, const CalibrationOutcome& outcome,
                    const EvalConfig& eval_cfg) {
    eval_cfg.validate();
    const auto front_end = make_front_end(outcome.config.front_end);

    EvalReport report;
    report.pair_name = pair.name;
    report.selected_radius = outcome.selected_radius;
    report.selected_radius_evaluated = front_end->snap_radius(outcome.selected_radius);

    std::vector<int> radii = eval_cfg.radii;
    radii.push_back(report.selected_radius_evaluated);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    // Validation draws from the back of the sample permutation; make sure the
    // calibration draw at shared radii cannot reach it.
    for (int radius : radii) {
        if (!front_end->radius_admissible(radius)) continue;
        const std::size_t total =
            admissible_center_count(pair, radius, front_end->sample_grid_step());
        if (total < static_cast<std::size_t>(eval_cfg.m_samples) +
                        static_cast<std::size_t>(outcome.config.n_samples))
            throw Error(ErrorKind::geometry,
                        "evaluate: calibration + validation samples exceed the " +
                            std::to_string(total) + " admissible centers at radius " +
                            std::to_string(radius));
    }

    for (int radius : radii) {
        if (!front_end->radius_admissible(radius)) {
            log_warn("evaluate: skipping radius " + std::to_string(radius) +
                     " (not admissible for " + front_end->name() + ")");
            continue;
        }
        const RecallResult r = recall_at_radius(pair, radius, eval_cfg.m_samples,
                                                eval_cfg.match_tol, *front_end,
                                                outcome.config.rng_seed);
        report.per_radius.push_back({radius, r.recall, r.mean_time_s, 0.0});
        log_info("evaluate '" + pair.name + "': radius " + std::to_string(radius) +
                 " recall " + std::to_string(r.recall));
    }
    if (report.per_radius.empty())
        throw Error(ErrorKind::geometry, "evaluate: no evaluable radius");

    report.p_g = ground_truth_optimal_radius(report.per_radius);

    std::vector<int> eval_radii;
    for (const RadiusEval& e : report.per_radius) eval_radii.push_back(e.radius);
    for (RadiusEval& e : report.per_radius)
        e.m_metric = m_metric(e.radius, report.p_g, eval_radii);
    report.m_at_selected =
        m_metric(report.selected_radius_evaluated, report.p_g, eval_radii);
    return report;
}

}  // namespace covcal
