#include "daynight/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace daynight::pipe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string format_pose(const geom::Pose6D& p) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "[%.6f,%.6f,%.6f,%.6f,%.6f,%.6f]", p.x, p.y, p.z, p.roll,
                  p.yaw, p.pitch);
    return buf;
}

std::string render_run_log(const ScenarioConfig& cfg, sim::Mode mode,
                           const track::RunResult& run) {
    std::ostringstream out;
    out << "{\"schema\":\"daynight-runlog/1\",\"scenario\":\"" << cfg.scenario_id
        << "\",\"mode\":\"" << sim::mode_name(mode) << "\",\"seed\":" << cfg.seed
        << ",\"config_hash\":\"" << cfg.config_hash << "\"}\n";
    char buf[512];
    for (const auto& rec : run.log) {
        std::snprintf(buf, sizeof(buf),
                      "{\"k\":%lld,\"t\":\"%s\",\"true\":%s,\"est\":%s,\"v\":%.6f,"
                      "\"cmd\":[%.6f,%.6f]}\n",
                      static_cast<long long>(rec.frame_index),
                      format_seconds(rec.timestamp).c_str(),
                      format_pose(rec.true_pose).c_str(),
                      format_pose(rec.estimated_pose).c_str(), rec.speed, rec.command.accel,
                      rec.command.steer);
        out << buf;
    }
    return out.str();
}

std::string render_manifest(const ScenarioConfig& cfg, double delta,
                            const std::vector<match::MatchedPair>& pairs,
                            std::size_t total_day_frames, std::size_t total_night_frames,
                            const std::vector<Rational>& day_cam_times,
                            const std::vector<Rational>& night_cam_times) {
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "{\"schema\":\"daynight-pairs/1\",\"scenario\":\"%s\",\"seed\":%llu,"
                  "\"config_hash\":\"%s\",\"delta_m\":%.4f,\"road_scene\":\"%s\","
                  "\"lighting\":\"%s\",\"total_day_frames\":%zu,\"total_night_frames\":%zu}\n",
                  cfg.scenario_id.c_str(), static_cast<unsigned long long>(cfg.seed),
                  cfg.config_hash.c_str(), delta, cfg.tags.road_scene.c_str(),
                  cfg.tags.lighting.c_str(), total_day_frames, total_night_frames);
    out << buf;
    std::size_t pair_id = 0;
    for (const auto& p : pairs) {
        std::snprintf(
            buf, sizeof(buf),
            "{\"pair\":%zu,\"road_scene\":\"%s\",\"lighting\":\"%s\",\"day_frame\":%lld,"
            "\"day_time\":\"%s\",\"night_frame\":%lld,\"night_time\":\"%s\","
            "\"position_error_m\":%.4f,\"angular_error_rad\":%.6f,\"status\":\"kept\"}\n",
            pair_id++, p.tags.road_scene.c_str(), p.tags.lighting.c_str(),
            static_cast<long long>(p.day_frame),
            format_seconds(day_cam_times[static_cast<std::size_t>(p.day_frame)]).c_str(),
            static_cast<long long>(p.night_frame),
            format_seconds(night_cam_times[static_cast<std::size_t>(p.night_frame)]).c_str(),
            p.position_error, p.angular_error);
        out << buf;
    }
    return out.str();
}

json stats_to_json(const match::ErrorStats& s) {
    return json{{"count", s.count}, {"mean", s.mean}, {"median", s.median},
                {"p95", s.p95},     {"max", s.max}};
}

} // namespace

RunArtifacts run_scenario(const ScenarioConfig& cfg_in, const PipelineOptions& options) {
    ScenarioConfig cfg = cfg_in;
    if (options.seed_override) {
        cfg.seed = *options.seed_override;
        cfg.sampling.seed = cfg.seed;
    }
    if (options.delta_override) cfg.matching.delta = *options.delta_override;
    if (options.unique_override) cfg.matching.unique_night_frames = *options.unique_override;
    if (cfg.matching.delta_diag < cfg.matching.delta)
        cfg.matching.delta_diag = cfg.matching.delta;

    const fs::path dir = fs::path(options.out_dir) / cfg.scenario_id;
    auto log_stage = [&](const char* stage) {
        if (options.verbosity > 0)
            std::fprintf(stderr, "[%s] %s\n", cfg.scenario_id.c_str(), stage);
    };

    log_stage("synthesizing field");
    field::PointCloud cloud;
    field::NdtGrid grid;
    try {
        cloud = field::synthesize_field(cfg.layout, cfg.sampling);
        grid = field::build_ndt_grid(cloud, cfg.ndt);
    } catch (const std::exception& e) {
        throw SimulationError("field", e.what());
    }

    track::Trajectory desired;
    try {
        desired = track::trajectory_from_waypoints(cfg.trajectory.waypoints,
                                                   cfg.trajectory.speed_mps,
                                                   cfg.trajectory.spacing);
    } catch (const std::exception& e) {
        throw SimulationError("trajectory", e.what());
    }

    const track::TrackingConfig tc = tracking_config(cfg);
    track::RunResult day_run, night_run;
    try {
        log_stage("tracking day run");
        day_run = track::track_trajectory(desired, run_condition(cfg, sim::Mode::day), cloud,
                                          grid, cfg.clock, cfg.seed, tc);
    } catch (const std::exception& e) {
        throw SimulationError("track-day", e.what());
    }
    try {
        log_stage("tracking night run");
        night_run = track::track_trajectory(desired, run_condition(cfg, sim::Mode::night),
                                            cloud, grid, cfg.clock, cfg.seed, tc);
    } catch (const std::exception& e) {
        throw SimulationError("track-night", e.what());
    }

    // Transient-object injection: each camera frame is independently tagged,
    // day frames first, then night, from the dedicated stream.
    match::AnomalyLog anomalies;
    Rng rng_anomaly = Rng::stream(cfg.seed, "anomalies");
    for (const auto& trig : day_run.camera_triggers)
        if (rng_anomaly.bernoulli(cfg.anomaly_rate)) anomalies.day_frames.insert(trig.frame_index);
    for (const auto& trig : night_run.camera_triggers)
        if (rng_anomaly.bernoulli(cfg.anomaly_rate))
            anomalies.night_frames.insert(trig.frame_index);

    log_stage("matching");
    auto to_streams = [](const track::RunResult& run) {
        match::RunStreams s;
        for (const auto& trig : run.camera_triggers) s.camera_times.push_back(trig.timestamp);
        s.pose_times = run.lidar_ticks;
        for (const auto& sample : run.realized.samples) s.poses.push_back(sample.pose);
        return s;
    };
    const match::RunStreams day_streams = to_streams(day_run);
    const match::RunStreams night_streams = to_streams(night_run);

    // Match once at the diagnostic threshold; refinement rejects the
    // decimeter band and anomaly-tagged frames, then the acceptance
    // threshold delta selects the final set.
    const match::MatchResult diag =
        match_pairs(day_streams, night_streams, cfg.matching.delta_diag, cfg.tags);
    match::RefineOptions refine_options;
    refine_options.unique_night_frames = cfg.matching.unique_night_frames;
    const match::RefineResult refined = refine_pairs(diag.pairs, anomalies, refine_options);

    std::vector<match::MatchedPair> final_pairs;
    for (const auto& p : refined.kept)
        if (p.position_error <= cfg.matching.delta) final_pairs.push_back(p);

    const std::size_t total_day_frames = day_streams.camera_times.size();
    const match::AlignmentReport report =
        match::alignment_report(final_pairs, total_day_frames);

    RunArtifacts artifacts;
    artifacts.scenario_id = cfg.scenario_id;
    artifacts.seed = cfg.seed;
    artifacts.config_hash = cfg.config_hash;
    artifacts.tags = cfg.tags;
    artifacts.report = report;
    for (const auto& f : refined.flags) {
        switch (f.reason) {
            case match::RefineReason::dynamic_object_mismatch: ++artifacts.flags_dynamic; break;
            case match::RefineReason::decimeter_error: ++artifacts.flags_decimeter; break;
            case match::RefineReason::duplicate_target: ++artifacts.flags_duplicate; break;
        }
    }

    log_stage("writing artifacts");
    artifacts.day_log_path = (dir / "run_day.jsonl").string();
    artifacts.night_log_path = (dir / "run_night.jsonl").string();
    artifacts.manifest_path = (dir / "pairs.jsonl").string();
    artifacts.report_path = (dir / "report.txt").string();
    artifacts.summary_path = (dir / "summary.json").string();

    write_atomic(artifacts.day_log_path, render_run_log(cfg, sim::Mode::day, day_run));
    write_atomic(artifacts.night_log_path, render_run_log(cfg, sim::Mode::night, night_run));
    write_atomic(artifacts.manifest_path,
                 render_manifest(cfg, cfg.matching.delta, final_pairs, total_day_frames,
                                 night_streams.camera_times.size(), day_streams.camera_times,
                                 night_streams.camera_times));
    write_atomic(artifacts.report_path, match::render_report_text(report));

    json summary;
    summary["schema"] = "daynight-summary/1";
    summary["scenario"] = cfg.scenario_id;
    summary["seed"] = cfg.seed;
    summary["config_hash"] = cfg.config_hash;
    summary["road_scene"] = cfg.tags.road_scene;
    summary["lighting"] = cfg.tags.lighting;
    summary["delta_m"] = cfg.matching.delta;
    summary["total_day_frames"] = total_day_frames;
    summary["total_night_frames"] = night_streams.camera_times.size();
    summary["matched_pairs"] = final_pairs.size();
    summary["yield"] = report.yield;
    summary["position_error"] = stats_to_json(report.position_error);
    summary["angular_error"] = stats_to_json(report.angular_error);
    summary["unmatched_at_delta_diag"] = diag.unmatched_day_frames.size();
    summary["flags"] = json{{"dynamic_object_mismatch", artifacts.flags_dynamic},
                            {"decimeter_error", artifacts.flags_decimeter},
                            {"duplicate_target", artifacts.flags_duplicate}};
    summary["artifacts"] = json{{"day_log", artifacts.day_log_path},
                                {"night_log", artifacts.night_log_path},
                                {"manifest", artifacts.manifest_path},
                                {"report", artifacts.report_path}};
    write_atomic(artifacts.summary_path, summary.dump(2) + "\n");

    return artifacts;
}

BatchSummary batch_run(const std::string& config_dir, const PipelineOptions& options) {
    std::vector<std::string> config_paths;
    for (const auto& entry : fs::directory_iterator(config_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            config_paths.push_back(entry.path().string());
    std::sort(config_paths.begin(), config_paths.end());
    if (config_paths.empty())
        throw ConfigError("batch_run: no *.json configs under " + config_dir);

    BatchSummary summary;
    for (const auto& path : config_paths) {
        BatchEntry entry;
        entry.config_path = path;
        try {
            const ScenarioConfig cfg = load_scenario(path);
            entry.artifacts = run_scenario(cfg, options);
            entry.ok = true;
            summary.total_pairs += entry.artifacts.report.matched;
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
            summary.all_ok = false;
        }
        summary.entries.push_back(std::move(entry));
    }
    return summary;
}

std::string render_batch_table(const BatchSummary& summary) {
    std::ostringstream out;
    char buf[320];
    out << "scenario                     road_scene        lighting                     "
           "pairs   yield  mean_err_m\n";
    for (const auto& e : summary.entries) {
        if (!e.ok) {
            std::snprintf(buf, sizeof(buf), "%-28s FAILED: %s\n", e.config_path.c_str(),
                          e.error.c_str());
            out << buf;
            continue;
        }
        const auto& r = e.artifacts.report;
        std::snprintf(buf, sizeof(buf), "%-28s %-17s %-28s %5zu   %.3f  %.4f\n",
                      e.artifacts.scenario_id.c_str(), e.artifacts.tags.road_scene.c_str(),
                      e.artifacts.tags.lighting.c_str(), r.matched, r.yield,
                      r.position_error.mean);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "total pairs: %zu   scenarios: %zu   failures: %zu\n",
                  summary.total_pairs, summary.entries.size(),
                  static_cast<std::size_t>(std::count_if(
                      summary.entries.begin(), summary.entries.end(),
                      [](const BatchEntry& e) { return !e.ok; })));
    out << buf;
    return out.str();
}

ManifestData load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("load_manifest: cannot open " + manifest_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_manifest: empty manifest");
    const json header = json::parse(line);
    if (header.at("schema").get<std::string>() != "daynight-pairs/1")
        throw std::runtime_error("load_manifest: unsupported schema");

    ManifestData data;
    data.scenario_id = header.at("scenario").get<std::string>();
    data.seed = header.at("seed").get<std::uint64_t>();
    data.delta = header.at("delta_m").get<double>();
    data.total_day_frames = header.at("total_day_frames").get<std::size_t>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        match::MatchedPair p;
        p.day_frame = j.at("day_frame").get<std::int64_t>();
        p.night_frame = j.at("night_frame").get<std::int64_t>();
        p.position_error = j.at("position_error_m").get<double>();
        p.angular_error = j.at("angular_error_rad").get<double>();
        p.tags.road_scene = j.at("road_scene").get<std::string>();
        p.tags.lighting = j.at("lighting").get<std::string>();
        data.pairs.push_back(p);
    }
    return data;
}

match::AlignmentReport report_from_manifest(const std::string& manifest_path) {
    const ManifestData data = load_manifest(manifest_path);
    return match::alignment_report(data.pairs, data.total_day_frames);
}

} // namespace daynight::pipe
