#pragma once

#include <vector>

#include "daynight/rational.hpp"

namespace daynight::sim {

enum class Mode { day, night };

inline const char* mode_name(Mode m) { return m == Mode::day ? "day" : "night"; }

/// Multi-rate sensor clock. All streams share the same start time; tick k of
/// a stream at rate r has timestamp start + k/r, computed exactly (no
/// floating-point drift).
struct SensorClock {
    int lidar_fps = 20;
    int day_camera_fps = 10;
    int night_camera_fps = 6;
    Rational start{0, 1};

    Rational lidar_tick(std::int64_t k) const { return start + Rational(k, lidar_fps); }
    Rational camera_tick(Mode mode, std::int64_t k) const {
        return start + Rational(k, camera_fps(mode));
    }
    int camera_fps(Mode mode) const {
        return mode == Mode::day ? day_camera_fps : night_camera_fps;
    }

    /// Number of ticks of a rate-r stream in [start, start + duration).
    std::int64_t tick_count(int fps, const Rational& duration) const;
};

struct CameraTrigger {
    std::int64_t frame_index = 0;
    Rational timestamp;
};

/// Exact-arithmetic trigger list for the mode's camera over
/// [start, start + duration). Throws if duration <= 0.
std::vector<CameraTrigger> camera_trigger_times(const SensorClock& clock, Mode mode,
                                                const Rational& duration);

} // namespace daynight::sim
