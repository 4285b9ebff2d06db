#include "covcal/cli.hpp"
#include "covcal/log.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"covcal - sensor-coverage calibration for surface-based visual localization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "covcal-out";
    std::string calibration_json = "calibration.json";
    covcal::CliOptions opts;

    std::uint64_t seed_value = 0;
    int threads_value = 0;
    auto add_shared = [&](CLI::App* cmd, bool with_config = true) {
        if (with_config)
            cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--seed", seed_value, "Override the configured RNG seed")
            ->each([&](const std::string&) { opts.seed = seed_value; });
        cmd->add_option("--threads", threads_value, "Worker thread cap")
            ->each([&](const std::string&) { opts.threads = threads_value; });
        cmd->add_flag("--plots", opts.plots, "Also emit SVG plots");
    };

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Sweep patch radii and select the operating radius");
    add_shared(calibrate);
    calibrate->add_flag("--multi", opts.multi,
                        "Average the per-pair selections of a multi-pair config");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Measure recall and the efficiency metric");
    add_shared(evaluate);
    evaluate->add_option("--calibration", calibration_json,
                         "calibration.json produced by the calibrate command");

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic aligned pair");
    std::string spec_path;
    synth->add_option("--spec", spec_path, "Surface/perturbation spec (JSON)")->required();
    add_shared(synth, false);

    CLI::App* sweep = app.add_subcommand("sweep", "Time localization per patch radius");
    add_shared(sweep);

    CLI11_PARSE(app, argc, argv);

    if (calibrate->parsed()) return covcal::cmd_calibrate(config_path, out_dir, opts);
    if (evaluate->parsed())
        return covcal::cmd_evaluate(config_path, calibration_json, out_dir, opts);
    if (synth->parsed()) return covcal::cmd_synth(spec_path, out_dir, opts);
    if (sweep->parsed()) return covcal::cmd_sweep(config_path, out_dir, opts);
    return 1;
}
