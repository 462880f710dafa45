#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "daynight/field.hpp"
#include "daynight/matching.hpp"
#include "daynight/sensor_clock.hpp"
#include "daynight/tracking.hpp"

namespace daynight::pipe {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed tag vocabularies for scenario metadata. Tags are carried through
/// to the manifests; they do not alter geometry.
const std::vector<std::string>& road_scene_tags();   // 6 entries
const std::vector<std::string>& lighting_tags();     // 12 entries

struct NoiseConfig {
    double lidar_range_sigma = 0.01; // m
    double accel_sigma = 0.03;       // m/s^2
    double steer_sigma = 0.001;      // rad
    double night_noise_scale = 1.2;
    double night_friction = 0.99;
};

struct MatchingConfig {
    double delta = 0.05;             // m, acceptance threshold
    double delta_diag = 0.30;        // m, diagnostic pre-threshold for refinement
    bool unique_night_frames = false;
};

struct TrajectoryConfig {
    std::vector<Eigen::Vector2d> waypoints;
    double speed_mps = 4.0;
    double spacing = 0.25;
};

/// One self-describing scenario: layout, desired trajectory, condition
/// multipliers, sensor rates, noise, matching thresholds, and the seed all
/// randomness flows from.
struct ScenarioConfig {
    std::string scenario_id;
    std::uint64_t seed = 0;
    match::ScenarioTags tags;
    sim::SensorClock clock;
    Rational duration{10, 1};

    field::FieldLayout layout;
    field::FieldSamplingParams sampling;
    field::NdtParams ndt;

    TrajectoryConfig trajectory;
    sim::VehicleParams vehicle;
    double sensor_height = 1.8;
    track::ControlParams control;
    track::PursuitParams pursuit;
    sim::ScanSimParams scan;
    loc::RegistrationParams registration;
    NoiseConfig noise;
    MatchingConfig matching;
    double anomaly_rate = 0.0;

    /// 16-hex-digit digest of the canonical serialized form; binds output
    /// artifacts to the exact configuration.
    std::string config_hash;
};

/// Parses and validates a scenario config file. Throws ConfigError with a
/// description of the first violated rule.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);

track::TrackingConfig tracking_config(const ScenarioConfig& cfg);
sim::RunCondition run_condition(const ScenarioConfig& cfg, sim::Mode mode);

} // namespace daynight::pipe
