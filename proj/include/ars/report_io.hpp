#pragma once

#include <fstream>

#include <json.hpp>

#include "ars/hash.hpp"
#include "ars/pipeline.hpp"

namespace ars {

inline const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::Observe: return "observe";
        case StepKind::Remove: return "remove";
        case StepKind::Restore: return "restore";
    }
    return "?";
}

// Run report, version "v1". The timing block is informational: planning wall
// time varies between replays and is excluded from the determinism digest.
inline nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json doc;
    doc["version"] = "v1";
    doc["prompt"] = r.prompt;
    if (r.roi_valid) {
        doc["parse"] = {{"anchor_tokens", r.anchor_tokens},
                        {"direction", direction_name(r.direction)}};
        doc["anchor_id"] = r.anchor_id;
        doc["roi"] = {{"lo", {r.roi.lo.x, r.roi.lo.y, r.roi.lo.z}},
                      {"hi", {r.roi.hi.x, r.roi.hi.y, r.roi.hi.z}}};
    }
    nlohmann::json trace = nlohmann::json::array();
    for (const TraceStep& s : r.trace) {
        nlohmann::json step;
        step["kind"] = step_kind_name(s.kind);
        step["coverage_after"] = s.coverage_after;
        if (s.kind == StepKind::Observe) {
            step["viewpoint"] = {{"position", {s.viewpoint.position.x, s.viewpoint.position.y,
                                               s.viewpoint.position.z}},
                                 {"yaw", s.viewpoint.yaw},
                                 {"pitch", s.viewpoint.pitch}};
            step["new_viewpoint"] = s.new_viewpoint;
        } else if (s.kind == StepKind::Remove) {
            step["object_id"] = s.object_id;
        }
        trace.push_back(std::move(step));
    }
    doc["trace"] = std::move(trace);
    doc["summary"] = {{"success", r.summary.success},
                      {"failure_reason", r.summary.failure_reason},
                      {"unique_viewpoints", r.summary.unique_viewpoints},
                      {"objects_moved", r.summary.objects_moved},
                      {"final_coverage", r.summary.final_coverage},
                      {"synthetic_time_s", r.summary.synthetic_time_s}};
    doc["timing"] = {{"planning_wall_s", r.summary.planning_wall_s},
                     {"deterministic", false}};
    return doc;
}

// Digest of the deterministic portion (everything but the timing block).
inline uint64_t report_digest(const RunReport& r) {
    nlohmann::json doc = report_to_json(r);
    doc.erase("timing");
    const std::string s = doc.dump();
    return fnv1a(s.data(), s.size());
}

inline void save_report(const RunReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << report_to_json(r).dump(2) << "\n";
}

}  // namespace ars
