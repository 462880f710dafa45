#include "daynight/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace daynight::match {

ErrorStats compute_stats(const std::vector<double>& values) {
    ErrorStats s;
    s.count = values.size();
    if (values.empty()) return s;

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    double sum = 0.0;
    for (const double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(sorted.size());

    const std::size_t n = sorted.size();
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const std::size_t rank95 =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    s.p95 = sorted[std::max<std::size_t>(rank95, 1) - 1];
    s.max = sorted.back();
    return s;
}

AlignmentReport alignment_report(const std::vector<MatchedPair>& pairs,
                                 std::size_t total_day_frames) {
    AlignmentReport report;
    report.total_day_frames = total_day_frames;
    report.matched = pairs.size();
    report.yield = total_day_frames == 0
                       ? 0.0
                       : static_cast<double>(pairs.size()) / static_cast<double>(total_day_frames);

    std::vector<double> pos, ang;
    std::map<std::string, std::vector<double>> per_tag;
    pos.reserve(pairs.size());
    ang.reserve(pairs.size());
    for (const auto& p : pairs) {
        pos.push_back(p.position_error);
        ang.push_back(p.angular_error);
        per_tag[p.tags.road_scene + "/" + p.tags.lighting].push_back(p.position_error);
    }
    report.position_error = compute_stats(pos);
    report.angular_error = compute_stats(ang);
    for (const auto& [tag, values] : per_tag) report.by_tag[tag] = compute_stats(values);
    return report;
}

std::string render_report_text(const AlignmentReport& report) {
    std::ostringstream out;
    char line[256];
    out << "alignment report\n";
    std::snprintf(line, sizeof(line), "  matched pairs : %zu / %zu day frames (yield %.3f)\n",
                  report.matched, report.total_day_frames, report.yield);
    out << line;
    if (report.matched > 0) {
        std::snprintf(line, sizeof(line),
                      "  position error [m]  : mean %.4f  median %.4f  p95 %.4f  max %.4f\n",
                      report.position_error.mean, report.position_error.median,
                      report.position_error.p95, report.position_error.max);
        out << line;
        std::snprintf(line, sizeof(line),
                      "  angular error [rad] : mean %.6f  median %.6f  p95 %.6f  max %.6f\n",
                      report.angular_error.mean, report.angular_error.median,
                      report.angular_error.p95, report.angular_error.max);
        out << line;
        for (const auto& [tag, stats] : report.by_tag) {
            std::snprintf(line, sizeof(line), "  [%s] pairs %zu  mean %.4f m  max %.4f m\n",
                          tag.c_str(), stats.count, stats.mean, stats.max);
            out << line;
        }
    }
    return out.str();
}

} // namespace daynight::match
