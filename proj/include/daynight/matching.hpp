#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "daynight/geometry.hpp"
#include "daynight/rational.hpp"

namespace daynight::match {

/// Camera-frame -> pose-index mapping by nearest-neighbor search in the time
/// domain. Ties resolve to the earlier pose index; comparisons are exact
/// (rational timestamps), so a camera frame equidistant between two pose
/// ticks maps deterministically.
struct FramePoseIndex {
    std::vector<std::size_t> pose_index;   // one entry per camera frame
    std::vector<Rational> camera_times;
    std::vector<Rational> pose_times;
};

FramePoseIndex build_psi(const std::vector<Rational>& camera_times,
                         const std::vector<Rational>& pose_times);

struct ScenarioTags {
    std::string road_scene;
    std::string lighting;
};

struct MatchedPair {
    std::int64_t day_frame = 0;
    std::int64_t night_frame = 0;
    double position_error = 0.0;     // m
    double angular_error = 0.0;      // rad
    geom::Pose6D day_pose;
    geom::Pose6D night_pose;
    ScenarioTags tags;
};

struct RunStreams {
    std::vector<Rational> camera_times;
    std::vector<geom::Pose6D> poses;        // pose stream at the localization rate
    std::vector<Rational> pose_times;
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    std::vector<std::int64_t> unmatched_day_frames;
    FramePoseIndex psi_day;
    FramePoseIndex psi_night;
};

/// For each day frame q, finds the night frame minimizing the position
/// distance between the mapped poses and emits a pair iff that minimum is at
/// or below delta. Argmin ties resolve to the smaller night frame index; a
/// night frame may serve multiple day frames.
MatchResult match_pairs(const RunStreams& day, const RunStreams& night, double delta,
                        const ScenarioTags& tags = {});

enum class RefineReason { dynamic_object_mismatch, decimeter_error, duplicate_target };

const char* refine_reason_name(RefineReason r);

struct RefinementFlag {
    RefineReason reason;
    std::int64_t day_frame = 0;
    std::int64_t night_frame = 0;
    double position_error = 0.0;
};

/// Camera frames tainted by an injected transient object in one run only.
struct AnomalyLog {
    std::unordered_set<std::int64_t> day_frames;
    std::unordered_set<std::int64_t> night_frames;
};

struct RefineOptions {
    double decimeter_threshold = 0.10;   // m
    bool unique_night_frames = false;    // resolve night-frame reuse by smallest error
};

struct RefineResult {
    std::vector<MatchedPair> kept;
    std::vector<RefinementFlag> flags;
};

/// Drops pairs whose day or night frame is anomaly-tagged, pairs at or above
/// the decimeter threshold, and (optionally) all but the best pair per night
/// frame. One flag per removal.
RefineResult refine_pairs(const std::vector<MatchedPair>& pairs, const AnomalyLog& anomalies,
                          const RefineOptions& options = {});

} // namespace daynight::match
