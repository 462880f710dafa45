#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daynight/report.hpp"
#include "daynight/scenario_config.hpp"

namespace daynight::pipe {

struct PipelineOptions {
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> delta_override;
    std::optional<bool> unique_override;
    int verbosity = 0;
};

/// Paths and identity of everything one scenario run produced.
struct RunArtifacts {
    std::string scenario_id;
    std::string day_log_path;
    std::string night_log_path;
    std::string manifest_path;
    std::string report_path;
    std::string summary_path;
    std::uint64_t seed = 0;
    std::string config_hash;
    match::ScenarioTags tags;

    // In-memory results for callers that keep going (batch, tests).
    match::AlignmentReport report;
    std::size_t flags_dynamic = 0;
    std::size_t flags_decimeter = 0;
    std::size_t flags_duplicate = 0;
};

struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_name(stage) {}
    std::string stage_name;
};

/// Full scenario pipeline: field -> grid -> day run -> night run -> psi ->
/// match -> refine -> report. All output files are written atomically.
RunArtifacts run_scenario(const ScenarioConfig& cfg, const PipelineOptions& options);

struct BatchEntry {
    std::string config_path;
    bool ok = false;
    std::string error;
    RunArtifacts artifacts;
};

struct BatchSummary {
    std::vector<BatchEntry> entries;
    std::size_t total_pairs = 0;
    bool all_ok = true;
};

/// Runs every *.json scenario under config_dir (sorted by filename).
/// Individual failures are recorded and the batch continues.
BatchSummary batch_run(const std::string& config_dir, const PipelineOptions& options);

std::string render_batch_table(const BatchSummary& summary);

/// Re-derives the alignment report from an existing pair manifest.
match::AlignmentReport report_from_manifest(const std::string& manifest_path);

/// Parses manifest pair records (used by the report verb and by tests).
struct ManifestData {
    std::string scenario_id;
    std::uint64_t seed = 0;
    double delta = 0.0;
    std::size_t total_day_frames = 0;
    std::vector<match::MatchedPair> pairs;
};
ManifestData load_manifest(const std::string& manifest_path);

} // namespace daynight::pipe
