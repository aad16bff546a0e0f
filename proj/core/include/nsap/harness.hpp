#pragma once

#include <iosfwd>

#include "nsap/scenario.hpp"

namespace nsap {

/// Exit codes shared by the orchestration layer and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEscaped = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConfig = 4;

struct ExecResult {
    int exit_code = kExitOk;
    RunManifest manifest;
    std::filesystem::path outdir;
};

/// Runs one scenario end to end: initial field, trajectory (single or
/// coupled), CSV series, checkpoints, inequality reports, manifest.
/// `resume_checkpoint`, when given, supplies the starting state and time.
ExecResult execute_scenario(const ScenarioSpec& spec, std::ostream& log,
                            const std::filesystem::path& outdir_override = {},
                            const std::filesystem::path& resume_checkpoint = {});

/// Continues the run recorded in `dir` (config echo + latest checkpoint) to
/// its configured t_end, appending to the stored series.
ExecResult resume_run(const std::filesystem::path& dir, std::ostream& log);

/// Rebuilds one inequality report from the stored CSV series and manifest,
/// rewrites its JSON file, and returns it. Unknown ids or a p missing from
/// the stored columns throw std::invalid_argument.
InequalityReport regenerate_check(const std::filesystem::path& dir, const std::string& id,
                                  int p);

const std::vector<std::string>& known_check_ids();

struct SeriesDiff {
    std::string column;
    double max_abs = 0;
    double max_rel = 0;
};
struct CompareResult {
    std::vector<SeriesDiff> columns;
    double checkpoint_l2_distance = -1.0;  // -1 when either side lacks a final checkpoint
    bool identical = true;
};
CompareResult compare_dirs(const std::filesystem::path& a, const std::filesystem::path& b);

/// lambda-rescaling invariance report for the scenario's initial field.
ScalingReport scale_test_scenario(const ScenarioSpec& spec, int lambda);

struct SweepMember {
    std::uint64_t seed = 0;
    double kappa_p = 0;
    double c_emp = 0;
    std::string verdict;
    std::string dir;
};
struct SweepResult {
    double target_kappa = 0;
    int p = 4;
    std::vector<SweepMember> members;
    double spread = 0;  // max/min of the member C_emp values
    bool all_hold = false;
};

/// Runs `count` scenarios whose initial data share one kappa_p (amplitudes
/// rescaled member by member), collects the ODE-bound constants, and writes
/// family_summary.json under the base output directory.
SweepResult run_sweep(const ScenarioSpec& base, int count, double target_kappa,
                      std::ostream& log);

}  // namespace nsap
