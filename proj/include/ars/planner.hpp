#pragma once

#include <array>
#include <numeric>
#include <vector>

#include "ars/parallel.hpp"
#include "ars/rng.hpp"
#include "ars/scorer.hpp"
#include "ars/sensing.hpp"

namespace ars {

using Enc5 = std::array<double, 5>;  // (x, y, z, yaw, pitch), positions normalized

struct ViewpointBounds {
    double yaw_lo = M_PI / 2 - 1.2;
    double yaw_hi = M_PI / 2 + 1.2;
    double pitch_lo = -0.6;
    double pitch_hi = 0.6;
};

// Valid camera placements: carved free space inside the grid plus the frontal
// approach box (a slab one shelf-depth deep in front of the opening, full
// width and height). The approach box keeps the space nonempty before the
// first observation, when the observed-free region is still empty.
class ViewpointSpace {
  public:
    ViewpointSpace(const Scene& scene, const ViewpointBounds& bounds)
        : scene_(scene), bounds_(bounds) {
        const Aabb grid = scene.spec.world_box();
        const Vec3 ext = scene.spec.extent();
        approach_ = {{grid.lo.x, grid.lo.y - ext.y, grid.lo.z}, {grid.hi.x, grid.lo.y, grid.hi.z}};
        sample_box_ = {approach_.lo, grid.hi};
    }

    const Aabb& approach_box() const { return approach_; }
    const ViewpointBounds& bounds() const { return bounds_; }

    bool valid_position(const Vec3& p) const {
        if (approach_.contains(p) && p.y < approach_.hi.y) return true;
        if (!scene_.spec.world_box().contains(p)) return false;
        const Index3 v = scene_.spec.voxel_of(p);
        if (!scene_.spec.contains(v)) return false;
        const size_t lin = scene_.spec.linear(v);
        return !scene_.occupied(lin) &&
               scene_.belief.states[lin] == BeliefState::ObservedFree;
    }

    bool valid(const Viewpoint& v) const {
        return v.yaw >= bounds_.yaw_lo && v.yaw <= bounds_.yaw_hi && v.pitch >= bounds_.pitch_lo &&
               v.pitch <= bounds_.pitch_hi && valid_position(v.position);
    }

    // Rejection-samples a valid viewpoint, uniform over the position region
    // and the angle bounds.
    Viewpoint sample_uniform(Rng& rng, int budget = 1000) const {
        for (int i = 0; i < budget; ++i) {
            Viewpoint v;
            v.position = {rng.uniform(sample_box_.lo.x, sample_box_.hi.x),
                          rng.uniform(sample_box_.lo.y, sample_box_.hi.y),
                          rng.uniform(sample_box_.lo.z, sample_box_.hi.z)};
            v.yaw = rng.uniform(bounds_.yaw_lo, bounds_.yaw_hi);
            v.pitch = rng.uniform(bounds_.pitch_lo, bounds_.pitch_hi);
            if (valid(v)) return v;
        }
        throw EmptyViewpointSpace("sample_uniform: no valid viewpoint within the sample budget");
    }

    // Encode/decode between viewpoints and the normalized 5-vector the
    // mixture operates on. Positions are scaled by the grid extent so one
    // sigma scale is meaningful across dimensions.
    Enc5 encode(const Viewpoint& v) const {
        const GridSpec& spec = scene_.spec;
        const Vec3 ext = spec.extent();
        return {(v.position.x - spec.origin.x) / ext.x, (v.position.y - spec.origin.y) / ext.y,
                (v.position.z - spec.origin.z) / ext.z, v.yaw, v.pitch};
    }

    Viewpoint decode(const Enc5& e) const {
        const GridSpec& spec = scene_.spec;
        const Vec3 ext = spec.extent();
        return {{spec.origin.x + e[0] * ext.x, spec.origin.y + e[1] * ext.y,
                 spec.origin.z + e[2] * ext.z},
                e[3], e[4]};
    }

  private:
    const Scene& scene_;
    ViewpointBounds bounds_;
    Aabb approach_;
    Aabb sample_box_;  // union bounds of approach box and grid
};

// Seeded uniform draw over the valid viewpoint region.
inline std::vector<Viewpoint> sample_uniform_viewpoints(const Scene& scene, int count,
                                                        uint64_t seed,
                                                        const ViewpointBounds& bounds = {}) {
    const ViewpointSpace space(scene, bounds);
    Rng rng(seed);
    std::vector<Viewpoint> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(space.sample_uniform(rng));
    return out;
}

// Diagonal Gaussian mixture over the encoded viewpoint space.
struct GmmComponent {
    Enc5 mean{};
    Enc5 stddev{};
    double weight = 0.0;
};

struct GmmState {
    std::vector<GmmComponent> components;

    int sample_component(Rng& rng) const {
        const double u = rng.uniform();
        double acc = 0.0;
        for (size_t k = 0; k < components.size(); ++k) {
            acc += components[k].weight;
            if (u < acc) return static_cast<int>(k);
        }
        return static_cast<int>(components.size()) - 1;
    }

    Enc5 sample(Rng& rng) const {
        const GmmComponent& c = components[static_cast<size_t>(sample_component(rng))];
        Enc5 e;
        for (int d = 0; d < 5; ++d) e[d] = rng.normal(c.mean[d], c.stddev[d]);
        return e;
    }
};

struct PlannerConfig {
    int uniform_seeds = 256;  // S: seeding samples scored before the mixture starts
    int batch = 128;          // B: samples per refinement iteration
    int elites = 32;          // K
    int iterations = 5;       // M
    int components = 7;       // N
    uint64_t seed = 0;
    ViewpointBounds bounds;
    double sigma_floor = 1e-3;
    Enc5 initial_sigma{0.1, 0.1, 0.1, 0.3, 0.3};
    int resample_budget = 100;  // mixture draws per slot before uniform fallback
    bool record_trace = false;

    void validate() const {
        if (elites > batch) throw Error("PlannerConfig: elites must be <= batch");
        if (components > uniform_seeds)
            throw Error("PlannerConfig: components must be <= uniform seeds");
        if (iterations < 1) throw Error("PlannerConfig: iterations must be >= 1");
    }
};

struct PlannerIterationTrace {
    std::vector<GmmComponent> mixture;
    std::vector<double> elite_scores;
};

struct PlannerResult {
    Viewpoint best;
    double best_score = -kInf;
    double seed_stage_best = -kInf;  // best score among the S uniform samples
    int evaluations = 0;
    std::vector<Viewpoint> final_elites;
    std::vector<PlannerIterationTrace> trace;
};

namespace detail {

inline double log_normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd);
}

// Hard assignment: component of maximal weighted likelihood, ties to the
// smaller index.
inline int assign_component(const GmmState& gmm, const Enc5& x) {
    int best = 0;
    double best_ll = -kInf;
    for (size_t k = 0; k < gmm.components.size(); ++k) {
        const GmmComponent& c = gmm.components[k];
        double ll = std::log(std::max(c.weight, 1e-300));
        for (int d = 0; d < 5; ++d) ll += log_normal_pdf(x[d], c.mean[d], c.stddev[d]);
        if (ll > best_ll) {
            best_ll = ll;
            best = static_cast<int>(k);
        }
    }
    return best;
}

}  // namespace detail

// Refit from elite samples: components with at least two assignees take their
// assignees' mean and per-dimension std (floored); starved components keep
// the previous mean with std halved; weights follow assignment counts, with
// eps for empty components, renormalized.
inline GmmState fit_gmm(const std::vector<Enc5>& elites, const GmmState& prev,
                        double sigma_floor = 1e-3) {
    if (elites.empty()) throw NoElites("fit_gmm: need at least one elite sample");
    const size_t n_comp = prev.components.size();
    std::vector<std::vector<const Enc5*>> assigned(n_comp);
    for (const Enc5& e : elites)
        assigned[static_cast<size_t>(detail::assign_component(prev, e))].push_back(&e);

    GmmState next;
    next.components.resize(n_comp);
    constexpr double kEmptyWeight = 1e-3;
    double weight_sum = 0.0;
    for (size_t k = 0; k < n_comp; ++k) {
        GmmComponent& c = next.components[k];
        const auto& members = assigned[k];
        if (members.size() >= 2) {
            for (int d = 0; d < 5; ++d) {
                double mean = 0.0;
                for (const Enc5* e : members) mean += (*e)[d];
                mean /= static_cast<double>(members.size());
                double var = 0.0;
                for (const Enc5* e : members) var += ((*e)[d] - mean) * ((*e)[d] - mean);
                var /= static_cast<double>(members.size());
                c.mean[d] = mean;
                c.stddev[d] = std::max(std::sqrt(var), sigma_floor);
            }
        } else {
            c.mean = prev.components[k].mean;
            for (int d = 0; d < 5; ++d)
                c.stddev[d] = std::max(prev.components[k].stddev[d] * 0.5, sigma_floor);
        }
        c.weight = members.empty() ? kEmptyWeight : static_cast<double>(members.size());
        weight_sum += c.weight;
    }
    for (GmmComponent& c : next.components) c.weight /= weight_sum;
    return next;
}

// Indices of the top-k scores, descending, ties to the smaller index.
inline std::vector<int> top_k_indices(const std::vector<double>& scores, int k) {
    std::vector<int> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    idx.resize(std::min<size_t>(idx.size(), static_cast<size_t>(k)));
    return idx;
}

// GMM-MPC viewpoint generation: score S uniform samples, seed the mixture
// with the N best, then iterate sample/score/elite/refit M times. Returns the
// argmax over every candidate evaluated, so the result can never fall below
// the best seeding sample.
inline PlannerResult gmm_mpc(const Scene& scene, const RoiBox& roi, const CoverageScorer& scorer,
                             const PlannerConfig& cfg) {
    cfg.validate();
    const ViewpointSpace space(scene, cfg.bounds);
    Rng rng(mix_seed(cfg.seed, 0x706c616eull));

    PlannerResult result;
    auto score_batch = [&](const std::vector<Viewpoint>& vps) {
        std::vector<double> scores(vps.size());
        parallel_for(vps.size(), [&](size_t i) { scores[i] = scorer.score(vps[i]); });
        result.evaluations += static_cast<int>(vps.size());
        for (size_t i = 0; i < vps.size(); ++i)
            if (scores[i] > result.best_score) {
                result.best_score = scores[i];
                result.best = vps[i];
            }
        return scores;
    };

    // Seeding stage.
    std::vector<Viewpoint> seeds(static_cast<size_t>(cfg.uniform_seeds));
    for (auto& v : seeds) v = space.sample_uniform(rng);
    const std::vector<double> seed_scores = score_batch(seeds);
    result.seed_stage_best = result.best_score;

    GmmState gmm;
    for (int i : top_k_indices(seed_scores, cfg.components)) {
        GmmComponent c;
        c.mean = space.encode(seeds[static_cast<size_t>(i)]);
        c.stddev = cfg.initial_sigma;
        c.weight = 1.0 / cfg.components;
        gmm.components.push_back(c);
    }

    std::vector<Viewpoint> batch(static_cast<size_t>(cfg.batch));
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        for (auto& v : batch) {
            bool ok = false;
            for (int attempt = 0; attempt < cfg.resample_budget && !ok; ++attempt) {
                const Viewpoint cand = space.decode(gmm.sample(rng));
                if (space.valid(cand)) {
                    v = cand;
                    ok = true;
                }
            }
            if (!ok) v = space.sample_uniform(rng);
        }
        const std::vector<double> scores = score_batch(batch);
        const std::vector<int> elite_idx = top_k_indices(scores, cfg.elites);
        std::vector<Enc5> elites;
        elites.reserve(elite_idx.size());
        for (int i : elite_idx) elites.push_back(space.encode(batch[static_cast<size_t>(i)]));
        gmm = fit_gmm(elites, gmm, cfg.sigma_floor);

        if (cfg.record_trace) {
            PlannerIterationTrace t;
            t.mixture = gmm.components;
            for (int i : elite_idx) t.elite_scores.push_back(scores[static_cast<size_t>(i)]);
            result.trace.push_back(std::move(t));
        }
        if (iter + 1 == cfg.iterations)
            for (int i : elite_idx) result.final_elites.push_back(batch[static_cast<size_t>(i)]);
    }
    return result;
}

}  // namespace ars
