#include "daynight/matching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace daynight::match {

FramePoseIndex build_psi(const std::vector<Rational>& camera_times,
                         const std::vector<Rational>& pose_times) {
    if (camera_times.empty() || pose_times.empty())
        throw std::invalid_argument("build_psi: empty time stream");
    for (std::size_t i = 1; i < camera_times.size(); ++i)
        if (!(camera_times[i - 1] < camera_times[i]))
            throw std::invalid_argument("build_psi: camera times not sorted");
    for (std::size_t i = 1; i < pose_times.size(); ++i)
        if (!(pose_times[i - 1] < pose_times[i]))
            throw std::invalid_argument("build_psi: pose times not sorted");

    FramePoseIndex psi;
    psi.camera_times = camera_times;
    psi.pose_times = pose_times;
    psi.pose_index.reserve(camera_times.size());

    // Both streams are sorted, so the nearest pose index is monotone in the
    // camera time; advance a cursor instead of re-searching.
    std::size_t cursor = 0;
    for (const Rational& t : camera_times) {
        while (cursor + 1 < pose_times.size() &&
               (pose_times[cursor + 1] - t).abs() < (pose_times[cursor] - t).abs())
            ++cursor;
        psi.pose_index.push_back(cursor);
    }
    return psi;
}

MatchResult match_pairs(const RunStreams& day, const RunStreams& night, double delta,
                        const ScenarioTags& tags) {
    if (delta <= 0.0) throw std::invalid_argument("match_pairs: delta must be positive");
    if (day.poses.size() != day.pose_times.size() ||
        night.poses.size() != night.pose_times.size())
        throw std::invalid_argument("match_pairs: pose/timestamp length mismatch");

    MatchResult result;
    result.psi_day = build_psi(day.camera_times, day.pose_times);

    if (night.camera_times.empty()) {
        for (std::size_t q = 0; q < day.camera_times.size(); ++q)
            result.unmatched_day_frames.push_back(static_cast<std::int64_t>(q));
        return result;
    }
    result.psi_night = build_psi(night.camera_times, night.pose_times);

    for (std::size_t q = 0; q < day.camera_times.size(); ++q) {
        const geom::Pose6D& day_pose = day.poses[result.psi_day.pose_index[q]];

        std::size_t best_f = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < night.camera_times.size(); ++f) {
            const double d =
                geom::position_distance(day_pose, night.poses[result.psi_night.pose_index[f]]);
            if (d < best_dist) {
                best_dist = d;
                best_f = f;
            }
        }

        if (best_dist <= delta) {
            const geom::Pose6D& night_pose = night.poses[result.psi_night.pose_index[best_f]];
            MatchedPair pair;
            pair.day_frame = static_cast<std::int64_t>(q);
            pair.night_frame = static_cast<std::int64_t>(best_f);
            pair.position_error = best_dist;
            pair.angular_error = geom::angular_distance(day_pose, night_pose);
            pair.day_pose = day_pose;
            pair.night_pose = night_pose;
            pair.tags = tags;
            result.pairs.push_back(pair);
        } else {
            result.unmatched_day_frames.push_back(static_cast<std::int64_t>(q));
        }
    }
    return result;
}

const char* refine_reason_name(RefineReason r) {
    switch (r) {
        case RefineReason::dynamic_object_mismatch: return "dynamic_object_mismatch";
        case RefineReason::decimeter_error: return "decimeter_error";
        case RefineReason::duplicate_target: return "duplicate_target";
    }
    return "unknown";
}

RefineResult refine_pairs(const std::vector<MatchedPair>& pairs, const AnomalyLog& anomalies,
                          const RefineOptions& options) {
    RefineResult result;
    std::vector<MatchedPair> survivors;
    survivors.reserve(pairs.size());

    for (const auto& p : pairs) {
        if (anomalies.day_frames.count(p.day_frame) ||
            anomalies.night_frames.count(p.night_frame)) {
            result.flags.push_back({RefineReason::dynamic_object_mismatch, p.day_frame,
                                    p.night_frame, p.position_error});
            continue;
        }
        if (p.position_error >= options.decimeter_threshold) {
            result.flags.push_back(
                {RefineReason::decimeter_error, p.day_frame, p.night_frame, p.position_error});
            continue;
        }
        survivors.push_back(p);
    }

    if (!options.unique_night_frames) {
        result.kept = std::move(survivors);
        return result;
    }

    // Night-frame reuse resolution: keep the smallest error per night frame
    // (ties to the smaller day frame), flag the rest.
    std::map<std::int64_t, std::size_t> winner; // night frame -> survivor index
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        const auto [it, inserted] = winner.try_emplace(survivors[i].night_frame, i);
        if (!inserted && survivors[i].position_error < survivors[it->second].position_error)
            it->second = i;
    }
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        if (winner.at(survivors[i].night_frame) == i) {
            result.kept.push_back(survivors[i]);
        } else {
            result.flags.push_back({RefineReason::duplicate_target, survivors[i].day_frame,
                                    survivors[i].night_frame, survivors[i].position_error});
        }
    }
    return result;
}

} // namespace daynight::match
