#include "daynight/scenario_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "daynight/rng.hpp"
#include "daynight/trajectory.hpp"

namespace daynight::pipe {

using nlohmann::json;

const std::vector<std::string>& road_scene_tags() {
    static const std::vector<std::string> tags = {
        "multi_lane_road", "single_lane_road", "curved_road",
        "open_road",       "t_intersection",   "intersection",
    };
    return tags;
}

const std::vector<std::string>& lighting_tags() {
    static const std::vector<std::string> tags = {
        "no_streetlight",
        "vehicle_low_beam",
        "bilateral_streetlight_vehicle_low_beam",
        "unilateral_streetlight_vehicle_low_beam",
        "bilateral_streetlight",
        "vehicle_high_beam",
        "bilateral_streetlight_vehicle_high_beam",
        "unilateral_streetlight_vehicle_high_beam",
        "unilateral_streetlight",
        "vehicle_backlight",
        "bilateral_streetlight_vehicle_backlight",
        "unilateral_streetlight_vehicle_backlight",
    };
    return tags;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& need(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing required key '") + key + "'");
    return *it;
}

double need_number(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double opt_number(const json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) fail(std::string("'") + key + "' must be a number");
    return it->get<double>();
}

int need_positive_int(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer() || v.get<int>() <= 0)
        fail(std::string("'") + key + "' must be a positive integer");
    return v.get<int>();
}

std::string fnv1a_hex(const std::string& text) {
    const std::uint64_t h = Rng::fnv1a64(text);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }

    if (!j.is_object()) fail("top level must be an object");
    if (need(j, "schema").get<std::string>() != "daynight-scenario/1")
        fail("unsupported schema (expected daynight-scenario/1)");

    ScenarioConfig cfg;
    cfg.scenario_id = need(j, "scenario_id").get<std::string>();
    if (cfg.scenario_id.empty()) fail("scenario_id must be nonempty");
    if (!need(j, "seed").is_number_unsigned() && !need(j, "seed").is_number_integer())
        fail("'seed' must be an integer");
    cfg.seed = need(j, "seed").get<std::uint64_t>();

    const json& tags = need(j, "tags");
    cfg.tags.road_scene = need(tags, "road_scene").get<std::string>();
    cfg.tags.lighting = need(tags, "lighting").get<std::string>();
    const auto& roads_vocab = road_scene_tags();
    if (std::find(roads_vocab.begin(), roads_vocab.end(), cfg.tags.road_scene) ==
        roads_vocab.end())
        fail("unknown road_scene tag '" + cfg.tags.road_scene + "'");
    const auto& light_vocab = lighting_tags();
    if (std::find(light_vocab.begin(), light_vocab.end(), cfg.tags.lighting) ==
        light_vocab.end())
        fail("unknown lighting tag '" + cfg.tags.lighting + "'");

    const json& rates = need(j, "rates");
    cfg.clock.lidar_fps = need_positive_int(rates, "lidar_fps");
    cfg.clock.day_camera_fps = need_positive_int(rates, "day_camera_fps");
    cfg.clock.night_camera_fps = need_positive_int(rates, "night_camera_fps");

    const double duration_s = need_number(j, "duration_s");
    if (duration_s <= 0.0) fail("'duration_s' must be positive");
    cfg.duration = Rational(static_cast<std::int64_t>(std::llround(duration_s * 1000.0)), 1000);

    const json& f = need(j, "field");
    if (f.contains("roads"))
        for (const auto& r : f.at("roads"))
            cfg.layout.roads.push_back({need_number(r, "x0"), need_number(r, "y0"),
                                        need_number(r, "x1"), need_number(r, "y1"),
                                        opt_number(r, "width", 7.0)});
    if (f.contains("poles"))
        for (const auto& p : f.at("poles")) {
            field::Pole pole;
            pole.x = need_number(p, "x");
            pole.y = need_number(p, "y");
            pole.radius = opt_number(p, "radius", 0.15);
            pole.height = opt_number(p, "height", 5.0);
            cfg.layout.poles.push_back(pole);
        }
    if (f.contains("vehicles"))
        for (const auto& v : f.at("vehicles")) {
            field::VehicleBox box;
            box.pose = geom::Pose6D(need_number(v, "x"), need_number(v, "y"),
                                    opt_number(v, "z", 0.75), 0.0, 0.0,
                                    opt_number(v, "yaw", 0.0));
            box.length = opt_number(v, "length", 4.5);
            box.width = opt_number(v, "width", 1.9);
            box.height = opt_number(v, "height", 1.5);
            cfg.layout.vehicles.push_back(box);
        }
    if (cfg.layout.empty()) fail("field layout is empty");
    cfg.sampling.ground_density = opt_number(f, "ground_density", 60.0);
    if (cfg.sampling.ground_density < 50.0) fail("ground_density below the 50/m^2 floor");
    cfg.sampling.ground_margin = opt_number(f, "ground_margin", 3.0);
    cfg.sampling.seed = cfg.seed;

    if (j.contains("ndt")) {
        const json& n = j.at("ndt");
        cfg.ndt.cell_size = opt_number(n, "cell_size", 1.0);
        if (cfg.ndt.cell_size <= 0.0) fail("ndt.cell_size must be positive");
        cfg.ndt.min_points_per_cell =
            static_cast<int>(opt_number(n, "min_points_per_cell", 5.0));
    }

    const json& t = need(j, "trajectory");
    for (const auto& w : need(t, "waypoints")) {
        if (!w.is_array() || w.size() != 2) fail("waypoints must be [x, y] pairs");
        cfg.trajectory.waypoints.emplace_back(w[0].get<double>(), w[1].get<double>());
    }
    if (cfg.trajectory.waypoints.empty()) fail("trajectory needs at least one waypoint");
    cfg.trajectory.speed_mps = need_number(t, "speed_mps");
    if (cfg.trajectory.speed_mps <= 0.0) fail("trajectory.speed_mps must be positive");
    cfg.trajectory.spacing = opt_number(t, "spacing", 0.25);

    if (j.contains("vehicle")) {
        const json& v = j.at("vehicle");
        cfg.vehicle.wheelbase = opt_number(v, "wheelbase", 2.7);
        cfg.vehicle.max_steer = opt_number(v, "max_steer", 0.55);
        cfg.vehicle.max_accel = opt_number(v, "max_accel", 3.0);
        cfg.vehicle.steer_tau = opt_number(v, "steer_tau", 0.15);
        cfg.vehicle.accel_tau = opt_number(v, "accel_tau", 0.10);
        cfg.sensor_height = opt_number(v, "sensor_height", 1.8);
    }
    cfg.control.wheelbase = cfg.vehicle.wheelbase;
    cfg.control.max_accel = cfg.vehicle.max_accel;
    cfg.control.max_steer = cfg.vehicle.max_steer;
    if (j.contains("control")) {
        const json& c = j.at("control");
        cfg.control.kp = opt_number(c, "kp", 0.8);
        cfg.control.ki = opt_number(c, "ki", 0.1);
        cfg.control.kd = opt_number(c, "kd", 0.05);
        cfg.control.integral_limit = opt_number(c, "integral_limit", 2.0);
        cfg.control.steer_rate_limit = opt_number(c, "steer_rate_limit", 0.7);
        cfg.pursuit.lookahead_gain = opt_number(c, "lookahead_gain", 1.5);
        cfg.pursuit.min_lookahead = opt_number(c, "min_lookahead", 2.0);
        cfg.pursuit.max_lookahead = opt_number(c, "max_lookahead", 8.0);
    }

    if (j.contains("scan")) {
        const json& s = j.at("scan");
        cfg.scan.max_range = opt_number(s, "max_range", 200.0);
        cfg.scan.min_elevation_deg = opt_number(s, "min_elevation_deg", -25.0);
        cfg.scan.max_elevation_deg = opt_number(s, "max_elevation_deg", 15.0);
        cfg.scan.max_points = static_cast<std::size_t>(opt_number(s, "max_points", 8000.0));
    }

    if (j.contains("noise")) {
        const json& n = j.at("noise");
        cfg.noise.lidar_range_sigma = opt_number(n, "lidar_range_sigma", 0.01);
        cfg.noise.accel_sigma = opt_number(n, "accel_sigma", 0.03);
        cfg.noise.steer_sigma = opt_number(n, "steer_sigma", 0.001);
        cfg.noise.night_noise_scale = opt_number(n, "night_noise_scale", 1.2);
        cfg.noise.night_friction = opt_number(n, "night_friction", 0.99);
        if (cfg.noise.night_noise_scale <= 0.0 || cfg.noise.night_friction <= 0.0)
            fail("night multipliers must be positive");
    }
    cfg.scan.range_sigma = cfg.noise.lidar_range_sigma;

    if (j.contains("matching")) {
        const json& m = j.at("matching");
        cfg.matching.delta = opt_number(m, "delta", 0.05);
        cfg.matching.delta_diag = opt_number(m, "delta_diag", 0.30);
        if (cfg.matching.delta <= 0.0) fail("matching.delta must be positive");
        if (cfg.matching.delta_diag < cfg.matching.delta)
            fail("matching.delta_diag must be >= matching.delta");
        if (m.contains("unique_night_frames"))
            cfg.matching.unique_night_frames = m.at("unique_night_frames").get<bool>();
    }

    if (j.contains("anomalies")) {
        cfg.anomaly_rate = opt_number(j.at("anomalies"), "rate", 0.0);
        if (cfg.anomaly_rate < 0.0 || cfg.anomaly_rate >= 1.0)
            fail("anomalies.rate must be in [0, 1)");
    }

    // The authored course must outlast the run, otherwise the vehicle drives
    // off the end and aborts mid-run.
    if (cfg.trajectory.waypoints.size() >= 2) {
        double arc = 0.0;
        for (std::size_t i = 1; i < cfg.trajectory.waypoints.size(); ++i)
            arc += (cfg.trajectory.waypoints[i] - cfg.trajectory.waypoints[i - 1]).norm();
        const double needed = cfg.trajectory.speed_mps * cfg.duration.to_double();
        if (arc < needed)
            fail("trajectory arc length " + std::to_string(arc) +
                 " m is shorter than the run distance " + std::to_string(needed) + " m");
    }

    cfg.config_hash = fnv1a_hex(j.dump());
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

track::TrackingConfig tracking_config(const ScenarioConfig& cfg) {
    track::TrackingConfig tc;
    tc.vehicle = cfg.vehicle;
    tc.actuation_noise = {cfg.noise.accel_sigma, cfg.noise.steer_sigma};
    tc.scan = cfg.scan;
    tc.pursuit = cfg.pursuit;
    tc.control = cfg.control;
    tc.registration = cfg.registration;
    tc.sensor_height = cfg.sensor_height;
    tc.duration = cfg.duration;
    return tc;
}

sim::RunCondition run_condition(const ScenarioConfig& cfg, sim::Mode mode) {
    sim::RunCondition cond;
    cond.mode = mode;
    cond.noise_scale = mode == sim::Mode::night ? cfg.noise.night_noise_scale : 1.0;
    cond.friction = mode == sim::Mode::night ? cfg.noise.night_friction : 1.0;
    return cond;
}

} // namespace daynight::pipe
