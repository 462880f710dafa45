#pragma once

#include <map>
#include <string>
#include <vector>

#include "daynight/matching.hpp"

namespace daynight::match {

struct ErrorStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;       // nearest-rank 95th percentile
    double max = 0.0;
};

ErrorStats compute_stats(const std::vector<double>& values);

struct AlignmentReport {
    std::size_t total_day_frames = 0;
    std::size_t matched = 0;
    double yield = 0.0;                    // matched / total day frames
    ErrorStats position_error;             // m
    ErrorStats angular_error;              // rad
    std::map<std::string, ErrorStats> by_tag;  // "road_scene/lighting" -> position stats
};

/// Distribution statistics over the final pair set; empty input yields an
/// empty report with yield 0.
AlignmentReport alignment_report(const std::vector<MatchedPair>& pairs,
                                 std::size_t total_day_frames);

std::string render_report_text(const AlignmentReport& report);

} // namespace daynight::match
