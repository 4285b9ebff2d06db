#pragma once

#include "covcal/calibration.hpp"
#include "covcal/error.hpp"
#include "covcal/evaluation.hpp"
#include "covcal/synthdata.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace covcal {

struct SynthPairSpec {
    std::string name;
    SurfaceSpec surface;
    PerturbSpec perturb;
};

// Fully validated run configuration; commands only start computing after a
// config parses cleanly.
struct RunConfig {
    CalibrationConfig calibration;
    EvalConfig evaluation;
    std::vector<std::filesystem::path> manifests;
    std::vector<SynthPairSpec> synthetic;

    bool has_data() const { return !manifests.empty() || !synthetic.empty(); }
};

RunConfig load_run_config(const std::filesystem::path& path);
SynthPairSpec load_synth_spec(const std::filesystem::path& path);

struct CliOptions {
    std::optional<std::uint64_t> seed;  // overrides the config seed
    std::optional<int> threads;
    bool plots = false;
    bool multi = false;
};

// Exit codes: 0 success, 1 config error, 2 data error, 3 compute error.
int exit_code_for(ErrorKind kind);

int cmd_calibrate(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, const CliOptions& opts);
int cmd_evaluate(const std::filesystem::path& config_path,
                 const std::filesystem::path& calibration_json,
                 const std::filesystem::path& out_dir, const CliOptions& opts);
int cmd_synth(const std::filesystem::path& spec_path,
              const std::filesystem::path& out_dir, const CliOptions& opts);
int cmd_sweep(const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir, const CliOptions& opts);

}  // namespace covcal
