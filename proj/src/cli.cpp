#include "covcal/cli.hpp"

#include "covcal/error.hpp"
#include "covcal/log.hpp"
#include "covcal/parallel.hpp"
#include "covcal/report.hpp"
#include "covcal/rng.hpp"

#include <json.hpp>

#include <fstream>

namespace covcal {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return 1;
        case ErrorKind::io:
        case ErrorKind::format:
        case ErrorKind::geometry: return 2;
        default: return 3;
    }
}

namespace {

void apply_options(const CliOptions& opts) {
    if (opts.threads) set_thread_count(*opts.threads);
}

AlignedPair realize_synth(const SynthPairSpec& spec) {
    AlignedPair pair = make_aligned_pair(generate_surface(spec.surface), spec.perturb);
    pair.name = spec.name;
    pair.provenance = "synthetic surface seed=" + std::to_string(spec.surface.seed) +
                      " perturb seed=" + std::to_string(spec.perturb.seed);
    return pair;
}

std::vector<AlignedPair> load_all_pairs(const RunConfig& cfg) {
    std::vector<AlignedPair> pairs;
    for (const auto& manifest : cfg.manifests) pairs.push_back(load_pair(manifest));
    for (const SynthPairSpec& s : cfg.synthetic) pairs.push_back(realize_synth(s));
    return pairs;
}

void ensure_out_dir(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory: " + out_dir.string());
}

int report_failure(const char* command, const std::exception& e, int code) {
    log_error(std::string(command) + ": " + e.what());
    return code;
}

// Timing sweep shared by cmd_sweep; median of three serialized batches.
std::vector<TimingRow> sweep_timings(const AlignedPair& pair, const FrontEnd& front_end,
                                     const std::vector<int>& radii, std::uint64_t seed) {
    std::vector<TimingRow> rows;
    for (int radius : radii) {
        if (!front_end.radius_admissible(radius)) {
            log_warn("sweep: skipping radius " + std::to_string(radius) +
                     " (not admissible for " + front_end.name() + ")");
            continue;
        }
        const RecallResult r =
            recall_at_radius(pair, radius, 8, 0, front_end, seed);
        rows.push_back({radius, r.mean_time_s});
        log_info("sweep: radius " + std::to_string(radius) + " mean localize " +
                 format_csv_value(r.mean_time_s) + " s");
    }
    if (rows.empty()) throw Error(ErrorKind::geometry, "sweep: no evaluable radius");
    return rows;
}

}  // namespace

int cmd_calibrate(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, const CliOptions& opts) {
    try {
        apply_options(opts);
        RunConfig cfg = load_run_config(config_path);
        if (opts.seed) cfg.calibration.rng_seed = *opts.seed;
        if (!cfg.has_data())
            throw Error(ErrorKind::config, "config names no dataset (manifests or synthetic)");

        const std::vector<AlignedPair> pairs = load_all_pairs(cfg);
        if (pairs.size() > 1 && !opts.multi)
            throw Error(ErrorKind::config,
                        "config names several pairs; pass --multi to average their selections");

        const CalibrationOutcome outcome = opts.multi && pairs.size() > 1
                                               ? calibrate_multi(pairs, cfg.calibration)
                                               : calibrate(pairs.front(), cfg.calibration);

        ensure_out_dir(out_dir);
        write_text_file(calibration_to_json(outcome).dump(2) + "\n",
                        out_dir / "calibration.json");
        const CalibrationOutcome& curve_source =
            outcome.per_pair.empty() ? outcome : outcome.per_pair.front();
        write_ovl_csv(curve_source.curve, out_dir / "ovl_curve.csv");
        for (std::size_t i = 1; i < outcome.per_pair.size(); ++i)
            write_ovl_csv(outcome.per_pair[i].curve,
                          out_dir / ("ovl_curve_" + outcome.per_pair[i].pair_name + ".csv"));
        if (opts.plots) write_ovl_svg(curve_source, out_dir / "ovl_curve.svg");

        log_info("selected radius: " + format_csv_value(outcome.selected_radius));
        return 0;
    } catch (const Error& e) {
        return report_failure("calibrate", e, exit_code_for(e.kind()));
    } catch (const std::exception& e) {
        return report_failure("calibrate", e, 3);
    }
}

int cmd_evaluate(const std::filesystem::path& config_path,
                 const std::filesystem::path& calibration_json,
                 const std::filesystem::path& out_dir, const CliOptions& opts) {
    try {
        apply_options(opts);
        RunConfig cfg = load_run_config(config_path);
        if (!cfg.has_data())
            throw Error(ErrorKind::config, "config names no dataset (manifests or synthetic)");

        const CalibrationOutcome outcome = load_calibration_json(calibration_json);

        std::vector<AlignedPair> pairs = load_all_pairs(cfg);
        if (pairs.size() > 1)
            log_warn("evaluate: several pairs configured; evaluating the first ('" +
                     pairs.front().name + "')");

        const EvalReport report = evaluate(pairs.front(), outcome, cfg.evaluation);

        ensure_out_dir(out_dir);
        write_text_file(eval_report_to_json(report).dump(2) + "\n", out_dir / "eval.json");
        write_eval_csv(report, out_dir / "eval.csv");
        if (opts.plots) {
            write_recall_svg(report, out_dir / "recall.svg");
            write_metric_svg(report, out_dir / "m_metric.svg");
        }

        log_info("p_g: " + std::to_string(report.p_g) +
                 ", m_at_selected: " + format_csv_value(report.m_at_selected));
        return 0;
    } catch (const Error& e) {
        return report_failure("evaluate", e, exit_code_for(e.kind()));
    } catch (const std::exception& e) {
        return report_failure("evaluate", e, 3);
    }
}

int cmd_synth(const std::filesystem::path& spec_path,
              const std::filesystem::path& out_dir, const CliOptions& opts) {
    try {
        apply_options(opts);
        SynthPairSpec spec = load_synth_spec(spec_path);
        if (opts.seed) {
            spec.surface.seed = *opts.seed;
            spec.perturb.seed = mix_seed({*opts.seed, 0x71ull});
        }

        const AlignedPair pair = realize_synth(spec);
        ensure_out_dir(out_dir);
        save_pgm(pair.reference, out_dir / "reference.pgm");
        save_pgm(pair.query, out_dir / "query.pgm");

        json manifest;
        manifest["name"] = spec.name;
        manifest["reference"] = "reference.pgm";
        manifest["query"] = "query.pgm";
        manifest["preprocess"] = {{"target_width", pair.reference.width}};
        manifest["notes"] = pair.provenance;
        write_text_file(manifest.dump(2) + "\n", out_dir / "manifest.json");
        return 0;
    } catch (const Error& e) {
        // A synthesizable spec is configuration; every failure here is the
        // operator's input.
        const int code = e.kind() == ErrorKind::io ? 2 : 1;
        return report_failure("synth", e, code);
    } catch (const std::exception& e) {
        return report_failure("synth", e, 3);
    }
}

int cmd_sweep(const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir, const CliOptions& opts) {
    try {
        apply_options(opts);
        RunConfig cfg = load_run_config(config_path);
        if (opts.seed) cfg.calibration.rng_seed = *opts.seed;
        if (!cfg.has_data())
            throw Error(ErrorKind::config, "config names no dataset (manifests or synthetic)");

        const std::vector<AlignedPair> pairs = load_all_pairs(cfg);
        const auto front_end = make_front_end(cfg.calibration.front_end);
        const std::vector<TimingRow> rows = sweep_timings(
            pairs.front(), *front_end, cfg.evaluation.radii, cfg.calibration.rng_seed);

        ensure_out_dir(out_dir);
        write_timing_csv(rows, out_dir / "timing.csv");
        if (opts.plots) write_timing_svg(rows, out_dir / "timing.svg");
        return 0;
    } catch (const Error& e) {
        return report_failure("sweep", e, exit_code_for(e.kind()));
    } catch (const std::exception& e) {
        return report_failure("sweep", e, 3);
    }
}

}  // namespace covcal
