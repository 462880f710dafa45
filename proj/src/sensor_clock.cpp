#include "daynight/sensor_clock.hpp"

#include <cstdio>
#include <stdexcept>

namespace daynight {

std::string format_seconds(const Rational& t) {
    // Round-half-away to 9 decimals in integer arithmetic.
    const bool neg = t.num < 0;
    const std::int64_t num = neg ? -t.num : t.num;
    constexpr std::int64_t kScale = 1000000000;
    const std::int64_t scaled = (num * kScale + t.den / 2) / t.den;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%lld.%09lld", neg ? "-" : "",
                  static_cast<long long>(scaled / kScale),
                  static_cast<long long>(scaled % kScale));
    return buf;
}

} // namespace daynight

namespace daynight::sim {

std::int64_t SensorClock::tick_count(int fps, const Rational& duration) const {
    if (fps <= 0) throw std::invalid_argument("SensorClock: fps must be positive");
    // Largest k with k/fps < duration, plus one for the start tick.
    const Rational d = duration;
    std::int64_t k = static_cast<std::int64_t>(d.to_double() * fps) + 2;
    while (k > 0 && !(Rational(k - 1, fps) < d)) --k;
    return k;
}

std::vector<CameraTrigger> camera_trigger_times(const SensorClock& clock, Mode mode,
                                                const Rational& duration) {
    if (!(Rational(0, 1) < duration))
        throw std::invalid_argument("camera_trigger_times: duration must be positive");
    const int fps = clock.camera_fps(mode);
    const std::int64_t n = clock.tick_count(fps, duration);
    std::vector<CameraTrigger> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) out.push_back({k, clock.camera_tick(mode, k)});
    return out;
}

} // namespace daynight::sim
