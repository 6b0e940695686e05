#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ars/blocking.hpp"
#include "ars/language.hpp"
#include "ars/planner.hpp"
#include "ars/scene_io.hpp"
#include "ars/scorer.hpp"

namespace ars {

enum class ObjectStrategy : uint8_t { Blocking = 0, Random = 1, Nearest = 2 };  // VB, RB, NB

inline const char* strategy_name(ObjectStrategy s) {
    switch (s) {
        case ObjectStrategy::Blocking: return "vb";
        case ObjectStrategy::Random: return "rb";
        case ObjectStrategy::Nearest: return "nb";
    }
    return "?";
}

inline ObjectStrategy strategy_from_name(const std::string& s) {
    if (s == "vb") return ObjectStrategy::Blocking;
    if (s == "rb") return ObjectStrategy::Random;
    if (s == "nb") return ObjectStrategy::Nearest;
    throw Error("unknown object strategy: " + s);
}

// Synthetic action costs; planning wall time is measured and reported
// separately (it is not part of the deterministic record).
struct TimeModel {
    double per_camera_move_s = 5.0;
    double per_relocation_s = 10.0;
};

struct PipelineConfig {
    double c_max = 0.8;            // coverage threshold
    int viewpoint_budget = 8;      // max unique viewpoints (success gate)
    int action_budget = 5;         // max camera moves + relocations (loop bound)
    int removals_per_phase = 2;    // manipulation-phase cap before replanning
    ScorerKind scorer = ScorerKind::OracleRoi;
    ObjectStrategy strategy = ObjectStrategy::Blocking;
    PlannerConfig planner;
    // Desk-scale experiment camera: short dependable depth range, a ray grid
    // sized for sub-second planning. The full-resolution sensing default
    // remains CameraConfig{}.
    CameraConfig camera{87.0, 58.0, 64, 48, 0.8};
    TimeModel time;
    double h_min = 0.02;  // one voxel edge; blocking threshold, meters
    uint64_t seed = 0;
    const ScorerModel* model = nullptr;  // required for learned scorers
    bool dump_belief = false;
    std::string dump_dir;

    void validate() const {
        if (c_max <= 0.0 || c_max > 1.0) throw Error("PipelineConfig: c_max must be in (0, 1]");
        if (viewpoint_budget < 1) throw Error("PipelineConfig: viewpoint budget must be >= 1");
        if (action_budget < 1) throw Error("PipelineConfig: action budget must be >= 1");
        if (scorer_is_learned(scorer) && !model)
            throw Error("PipelineConfig: learned scorer requires a model");
    }
};

enum class StepKind : uint8_t { Observe = 0, Remove = 1, Restore = 2 };

struct TraceStep {
    StepKind kind = StepKind::Observe;
    Viewpoint viewpoint;      // for Observe steps
    int32_t object_id = -1;   // for Remove steps
    bool new_viewpoint = false;
    double coverage_after = 0.0;
};

struct RunSummary {
    bool success = false;
    std::string failure_reason;  // empty for successful runs
    int unique_viewpoints = 0;
    int objects_moved = 0;
    double final_coverage = 0.0;
    double synthetic_time_s = 0.0;
    double planning_wall_s = 0.0;  // measured; excluded from replay digests
};

struct RunReport {
    std::string prompt;
    std::vector<std::string> anchor_tokens;
    Direction direction = Direction::Left;
    int32_t anchor_id = -1;
    RoiBox roi{};
    bool roi_valid = false;
    std::vector<TraceStep> trace;
    RunSummary summary;
};

// Camera home pose: centered in the approach box, facing the scene center.
inline Viewpoint home_viewpoint(const Scene& scene) {
    const Aabb grid = scene.spec.world_box();
    const Vec3 ext = scene.spec.extent();
    return {{0.5 * (grid.lo.x + grid.hi.x), grid.lo.y - 0.5 * ext.y,
             0.5 * (grid.lo.z + grid.hi.z)},
            M_PI / 2, 0.0};
}

namespace detail {

inline bool object_observed(const Scene& scene, const SceneObject& obj) {
    if (!obj.present) return false;
    for (uint32_t v : obj.voxels)
        if (scene.belief.states[v] == BeliefState::ObservedOccupied) return true;
    return false;
}

// Fraction of the ROI the user has been shown so far. Voxels stay counted
// once observed even if a later removal resets the planning belief there:
// delivered images cannot be taken back.
class RoiCoverageTracker {
  public:
    RoiCoverageTracker(const GridSpec& spec, const RoiBox& roi) : spec_(spec), roi_(roi) {
        seen_.assign(roi.volume_voxels(), 0);
    }

    double update(const VoxelBelief& belief) {
        size_t idx = 0, seen = 0;
        for (int x = roi_.lo.x; x <= roi_.hi.x; ++x)
            for (int y = roi_.lo.y; y <= roi_.hi.y; ++y)
                for (int z = roi_.lo.z; z <= roi_.hi.z; ++z, ++idx) {
                    if (!seen_[idx] &&
                        belief.states[spec_.linear({x, y, z})] != BeliefState::Unknown)
                        seen_[idx] = 1;
                    seen += seen_[idx];
                }
        coverage_ = static_cast<double>(seen) / static_cast<double>(seen_.size());
        return coverage_;
    }

    double coverage() const { return coverage_; }

  private:
    GridSpec spec_;
    RoiBox roi_;
    std::vector<uint8_t> seen_;
    double coverage_ = 0.0;
};

}  // namespace detail

// Removal candidate under the configured strategy, or nullopt when none
// qualifies. VB: top-ranked blocker above h_min. RB: seeded-uniform present
// observed object. NB: present observed object nearest to the camera (by its
// closest observed-occupied voxel center). The anchor is never a candidate.
inline std::optional<int32_t> select_object(ObjectStrategy strategy, const Scene& scene,
                                            const RoiBox& roi, const Viewpoint& v,
                                            const CameraConfig& cam, double h_min,
                                            int32_t anchor_id, Rng& rng) {
    if (strategy == ObjectStrategy::Blocking) {
        const auto ranked = rank_blockers(scene, roi, v, h_min, cam, anchor_id);
        if (ranked.empty()) return std::nullopt;
        return ranked.front().object_id;
    }
    std::vector<int32_t> candidates;
    for (const SceneObject& obj : scene.objects)
        if (obj.id != anchor_id && detail::object_observed(scene, obj))
            candidates.push_back(obj.id);
    if (candidates.empty()) return std::nullopt;
    if (strategy == ObjectStrategy::Random)
        return candidates[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int>(candidates.size()) - 1))];
    // Nearest: minimal distance from the camera to an observed surface voxel.
    int32_t best = -1;
    double best_d = kInf;
    for (int32_t id : candidates) {
        const SceneObject& obj = scene.object(id);
        for (uint32_t lin : obj.voxels) {
            if (scene.belief.states[lin] != BeliefState::ObservedOccupied) continue;
            const double d = norm(scene.spec.voxel_center(scene.spec.unlinear(lin)) - v.position);
            if (d < best_d) {
                best_d = d;
                best = id;
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

// The full language-guided loop: initial observation, ROI construction, then
// alternating planned viewpoints and blocking-object relocations until the
// coverage threshold, the viewpoint budget, or the action budget is reached.
// Staged objects are put back after every manipulation phase, so the scene's
// ground truth ends where it started.
inline RunReport run_pipeline(Scene& scene, const std::string& prompt,
                              const PipelineConfig& cfg) {
    cfg.validate();
    cfg.camera.validate();
    RunReport report;
    report.prompt = prompt;

    struct PoseKey {
        double x, y, z, yaw, pitch;
        auto operator<=>(const PoseKey&) const = default;
    };
    std::set<PoseKey> visited;
    auto pose_key = [](const Viewpoint& v) {
        return PoseKey{v.position.x, v.position.y, v.position.z, v.yaw, v.pitch};
    };

    int dump_index = 0;
    auto maybe_dump = [&]() {
        if (!cfg.dump_belief) return;
        char name[32];
        std::snprintf(name, sizeof(name), "belief_t%04d.v1", dump_index++);
        dump_belief(scene.belief, cfg.dump_dir.empty() ? name : cfg.dump_dir + "/" + name);
    };

    // Initial observation from the home pose (not counted against the action
    // budget; it is where the user picks the ROI from).
    const Viewpoint home = home_viewpoint(scene);
    observe(scene, home, cfg.camera);
    visited.insert(pose_key(home));
    maybe_dump();

    auto fail = [&](const std::string& reason) {
        report.summary.success = false;
        report.summary.failure_reason = reason;
        report.summary.unique_viewpoints = static_cast<int>(visited.size());
        report.summary.synthetic_time_s = cfg.time.per_camera_move_s * visited.size();
        return report;
    };

    RoiBox roi;
    try {
        const PromptParse parse = parse_prompt(prompt);
        report.anchor_tokens = parse.anchor_tokens;
        report.direction = parse.direction;
        report.anchor_id = resolve_anchor(parse, scene);
        roi = build_roi(scene, report.anchor_id, parse.direction);
        report.roi = roi;
        report.roi_valid = true;
    } catch (const Error& e) {
        report.trace.push_back({StepKind::Observe, home, -1, true, 0.0});
        return fail(e.what());
    }

    detail::RoiCoverageTracker tracker(scene.spec, roi);
    report.trace.push_back({StepKind::Observe, home, -1, true, tracker.update(scene.belief)});

    Rng strategy_rng(mix_seed(cfg.seed, 0x73656c6563ull));
    int actions = 0, moved = 0, planned_steps = 0;
    double planning_wall = 0.0;
    auto out_of_budget = [&] {
        return static_cast<int>(visited.size()) >= cfg.viewpoint_budget ||
               actions >= cfg.action_budget;
    };

    while (tracker.coverage() < cfg.c_max && !out_of_budget()) {
        PlannerConfig pcfg = cfg.planner;
        pcfg.seed = mix_seed(cfg.seed, 0x706c616e00ull + static_cast<uint64_t>(planned_steps++));
        const auto scorer = make_scorer(cfg.scorer, scene, roi, cfg.camera, cfg.model);

        Viewpoint v;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            v = gmm_mpc(scene, roi, *scorer, pcfg).best;
            planning_wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count();
        } catch (const Error& e) {
            report.summary.planning_wall_s = planning_wall;
            report.summary.final_coverage = tracker.coverage();
            return fail(e.what());
        }

        observe(scene, v, cfg.camera);
        ++actions;
        const bool fresh = visited.insert(pose_key(v)).second;
        report.trace.push_back({StepKind::Observe, v, -1, fresh, tracker.update(scene.belief)});
        maybe_dump();

        // Manipulation phase: while view-blocking objects remain, relocate
        // candidates picked by the configured strategy, re-observing from the
        // viewpoint the blocking scores were computed from. The phase yields
        // back to viewpoint planning after a few relocations.
        int phase_removals = 0;
        while (tracker.coverage() < cfg.c_max && actions < cfg.action_budget &&
               phase_removals < cfg.removals_per_phase) {
            const auto blockers =
                rank_blockers(scene, roi, v, cfg.h_min, cfg.camera, report.anchor_id);
            if (blockers.empty()) break;
            const auto pick = select_object(cfg.strategy, scene, roi, v, cfg.camera, cfg.h_min,
                                            report.anchor_id, strategy_rng);
            if (!pick) break;
            scene.remove_object(*pick);
            ++moved;
            ++actions;
            ++phase_removals;
            report.trace.push_back(
                {StepKind::Remove, v, *pick, false, tracker.update(scene.belief)});
            observe(scene, v, cfg.camera);
            report.trace.push_back(
                {StepKind::Observe, v, -1, false, tracker.update(scene.belief)});
            maybe_dump();
        }

        scene.restore_scene();
        report.trace.push_back({StepKind::Restore, v, -1, false, tracker.coverage()});
    }

    RunSummary& s = report.summary;
    s.unique_viewpoints = static_cast<int>(visited.size());
    s.objects_moved = moved;
    s.final_coverage = tracker.coverage();
    s.success = s.final_coverage >= cfg.c_max && s.unique_viewpoints <= cfg.viewpoint_budget;
    if (!s.success) s.failure_reason = "coverage threshold not reached within budget";
    s.synthetic_time_s =
        cfg.time.per_camera_move_s * visited.size() + cfg.time.per_relocation_s * moved;
    s.planning_wall_s = planning_wall;
    return report;
}

}  // namespace ars
