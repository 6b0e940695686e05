#pragma once

#include <memory>
#include <string>

#include "ars/features.hpp"
#include "ars/mlp.hpp"
#include "ars/sensing.hpp"

namespace ars {

// ROI variants score the requested region; SCENE variants score the whole
// grid (the original whole-scene ScoreNet formulation). ORACLE variants
// simulate the observation; LEARNED variants query the trained regressor.
enum class ScorerKind : uint8_t { OracleRoi = 0, OracleScene = 1, LearnedRoi = 2, LearnedScene = 3 };

inline const char* scorer_kind_name(ScorerKind k) {
    switch (k) {
        case ScorerKind::OracleRoi: return "oracle-roi";
        case ScorerKind::OracleScene: return "oracle-scene";
        case ScorerKind::LearnedRoi: return "learned-roi";
        case ScorerKind::LearnedScene: return "learned-scene";
    }
    return "?";
}

inline ScorerKind scorer_kind_from_name(const std::string& s) {
    if (s == "oracle-roi") return ScorerKind::OracleRoi;
    if (s == "oracle-scene") return ScorerKind::OracleScene;
    if (s == "learned-roi") return ScorerKind::LearnedRoi;
    if (s == "learned-scene") return ScorerKind::LearnedScene;
    throw Error("unknown scorer kind: " + s);
}

inline bool scorer_is_learned(ScorerKind k) {
    return k == ScorerKind::LearnedRoi || k == ScorerKind::LearnedScene;
}

// Coverage attainable from v: simulates the observation on a scratch copy of
// the belief and evaluates the coverage rate there. The scene is not mutated.
inline double oracle_score(const Scene& scene, const RoiBox& roi, const Viewpoint& v,
                           const CameraConfig& cam) {
    roi.validate(scene.spec);
    if (!viewpoint_valid(scene, v))
        throw InvalidViewpoint("oracle_score: camera position inside an occupied voxel");
    VoxelBelief scratch = scene.belief;
    detail::sweep_frustum(scene, v, cam, [&](uint32_t lin, bool occupied_hit) {
        scratch.states[lin] =
            occupied_hit ? BeliefState::ObservedOccupied : BeliefState::ObservedFree;
    });
    return coverage(scratch, roi);
}

// Viewpoint utility bound to one (scene snapshot, region) pair; what the
// planner maximizes. Implementations are const and safe to call in parallel.
class CoverageScorer {
  public:
    virtual ~CoverageScorer() = default;
    virtual double score(const Viewpoint& v) const = 0;
};

class OracleScorer final : public CoverageScorer {
  public:
    OracleScorer(const Scene& scene, const RoiBox& region, const CameraConfig& cam)
        : scene_(scene), region_(region), cam_(cam) {}

    double score(const Viewpoint& v) const override {
        return oracle_score(scene_, region_, v, cam_);
    }

  private:
    const Scene& scene_;
    RoiBox region_;
    CameraConfig cam_;
};

// Learned scorer with the grid channels folded into the first layer once per
// (belief, region): per-candidate work is the 7 viewpoint features onward.
class LearnedScorer final : public CoverageScorer {
  public:
    LearnedScorer(const Scene& scene, const RoiBox& region, const ScorerModel& model)
        : spec_(scene.spec), model_(model) {
        if (model.input_size() != kFeatureLength)
            throw ShapeMismatch("LearnedScorer: model input size " +
                                std::to_string(model.input_size()) + " != feature length " +
                                std::to_string(kFeatureLength));
        Eigen::VectorXd grid(2 * kChannelSize);
        pool_channels(scene.belief, region, spec_, grid);
        base_ = model.weights[0].leftCols(2 * kChannelSize) * grid + model.biases[0];
    }

    double score(const Viewpoint& v) const override {
        Eigen::VectorXd vp(kViewpointFeatures);
        viewpoint_features(v, spec_, vp);
        Eigen::VectorXd a = (base_ + model_.weights[0].rightCols(kViewpointFeatures) * vp).cwiseMax(0.0);
        for (size_t l = 1; l < model_.weights.size(); ++l) {
            Eigen::VectorXd z = model_.weights[l] * a + model_.biases[l];
            if (l + 1 < model_.weights.size())
                a = z.cwiseMax(0.0);
            else
                a = (1.0 + (-z.array()).exp()).inverse().matrix();
        }
        return a(0);
    }

  private:
    GridSpec spec_;
    const ScorerModel& model_;
    Eigen::VectorXd base_;  // first-layer preactivation from the grid channels
};

// Binds a scorer kind to (scene, roi). SCENE kinds query with the whole grid
// as the region; LEARNED kinds require a model.
inline std::unique_ptr<CoverageScorer> make_scorer(ScorerKind kind, const Scene& scene,
                                                   const RoiBox& roi, const CameraConfig& cam,
                                                   const ScorerModel* model) {
    const RoiBox region =
        (kind == ScorerKind::OracleScene || kind == ScorerKind::LearnedScene)
            ? full_grid_roi(scene.spec)
            : roi;
    switch (kind) {
        case ScorerKind::OracleRoi:
        case ScorerKind::OracleScene:
            return std::make_unique<OracleScorer>(scene, region, cam);
        case ScorerKind::LearnedRoi:
        case ScorerKind::LearnedScene:
            if (!model) throw Error("make_scorer: learned scorer requires a model");
            return std::make_unique<LearnedScorer>(scene, region, *model);
    }
    throw Error("make_scorer: bad kind");
}

}  // namespace ars
