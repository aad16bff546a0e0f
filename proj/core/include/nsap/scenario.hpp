#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nsap/initial_conditions.hpp"
#include "nsap/monitor.hpp"
#include "nsap/solver.hpp"

namespace nsap {

/// A full run description, readable from and writable to the sectioned
/// config format ([grid], [ic], [solver], [monitor], [perturbation],
/// [output]).
struct ScenarioSpec {
    int dim = 3;
    int n = 32;
    double box_length = 2.0 * M_PI;

    IcParams ic;
    SolverConfig solver;
    MonitorConfig monitor;
    std::vector<std::string> checks{"1.2", "2.1", "2.2", "2.3", "monotone"};

    bool perturbation_enabled = false;
    IcParams w_ic;

    std::string output_dir = "out";
    int checkpoint_stride = 0;  // checkpoints every k-th snapshot; 0 = ends only
    bool write_reports = true;
};

ScenarioSpec parse_config(const std::string& text);
ScenarioSpec load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioSpec& spec);

/// FNV-1a hash of the canonical serialized config.
std::uint64_t scenario_hash(const ScenarioSpec& spec);

std::string code_version();

struct RunManifest {
    std::string scenario_hash;
    std::string code_version;
    std::string started_utc;
    std::string finished_utc;
    std::uint64_t seed = 0;
    bool escaped = false;
    double escape_time = 0.0;
    int exit_code = 0;
    InitialNorms initial;
    std::map<std::string, std::string> verdicts;  // inequality id -> verdict
    std::vector<std::string> warnings;
    std::vector<std::string> files;  // everything written to the output dir
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace nsap
