#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ars/dataset.hpp"
#include "ars/parallel.hpp"
#include "ars/pipeline.hpp"
#include "ars/report_io.hpp"

namespace ars {

// A benchmark column: which coverage scorer drives the planner and which
// strategy picks removal candidates. "Ours" is the ROI scorer with
// blocking-score removal; the baselines swap one or both pieces.
struct MethodSpec {
    std::string name;
    ScorerKind scorer = ScorerKind::OracleRoi;
    ObjectStrategy strategy = ObjectStrategy::Blocking;
};

inline MethodSpec method_from_name(const std::string& name, bool oracle) {
    const ScorerKind roi = oracle ? ScorerKind::OracleRoi : ScorerKind::LearnedRoi;
    const ScorerKind scene = oracle ? ScorerKind::OracleScene : ScorerKind::LearnedScene;
    if (name == "ours") return {name, roi, ObjectStrategy::Blocking};
    if (name == "rs-rb") return {name, roi, ObjectStrategy::Random};
    if (name == "rs-nb") return {name, roi, ObjectStrategy::Nearest};
    if (name == "s-vb") return {name, scene, ObjectStrategy::Blocking};
    if (name == "s-nb") return {name, scene, ObjectStrategy::Nearest};
    throw Error("unknown method: " + name);
}

// Objects intersecting the region divided by the region volume in m^3.
inline double region_density(const Scene& scene, const RoiBox& roi) {
    roi.validate(scene.spec);
    size_t inside = 0;
    for (const SceneObject& obj : scene.objects) {
        if (!obj.present) continue;
        for (uint32_t lin : obj.voxels)
            if (roi.contains(scene.spec.unlinear(lin))) {
                ++inside;
                break;
            }
    }
    return static_cast<double>(inside) / roi.volume_m3(scene.spec);
}

struct BenchRow {
    int scene_index = 0;
    std::string method;
    bool success = false;
    double final_coverage = 0.0;
    int unique_viewpoints = 0;
    int objects_moved = 0;
    double synthetic_time_s = 0.0;
    double density = 0.0;
    uint64_t run_seed = 0;
    std::string failure_reason;
    double planning_wall_s = 0.0;  // sidecar only; not part of the result table
};

struct Aggregate {
    std::string method;
    int runs = 0;
    double success_rate = 0.0;  // percent
    double moved_mean = 0.0, moved_std = 0.0;
    double viewpoints_mean = 0.0, viewpoints_std = 0.0;
    double time_mean = 0.0, time_std = 0.0;
};

struct StratumRow {
    double density_lo = 0.0, density_hi = 0.0;
    std::string method;
    int runs = 0;
    double success_rate = 0.0;
    double moved_mean = 0.0;
    double viewpoints_mean = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<Aggregate> aggregates;
    std::vector<StratumRow> strata;
    std::vector<double> strata_edges;
};

struct BenchConfig {
    PipelineConfig pipeline;  // shared run settings; scorer/strategy overridden per method
    int strata_bins = 3;
};

namespace detail {

struct PromptAndRoi {
    std::string prompt;
    RoiBox roi;
    double density = 0.0;
};

// Shared per-scene prompt: a direction and an anchor that is visible from the
// home pose and leaves a nonempty region, drawn deterministically from the
// scene seed. The prompt wording matches the parser's fixture grammar.
inline PromptAndRoi make_scene_prompt(const Scene& base, const CameraConfig& cam, uint64_t seed) {
    Scene probe = base;  // belief scratch copy; the caller's scene is untouched
    observe(probe, home_viewpoint(probe), cam);
    Rng rng(mix_seed(seed, 0x70726f6d7074ull));
    for (int attempt = 0; attempt < 256; ++attempt) {
        const int id = rng.uniform_int(0, static_cast<int>(probe.objects.size()) - 1);
        const auto dir = static_cast<Direction>(rng.uniform_int(0, 3));
        const SceneObject& obj = probe.object(id);
        bool visible = false;
        for (uint32_t v : obj.voxels)
            if (probe.belief.states[v] == BeliefState::ObservedOccupied) {
                visible = true;
                break;
            }
        if (!visible) continue;
        RoiBox roi;
        try {
            roi = build_roi(probe, id, dir);
        } catch (const EmptyRoi&) {
            continue;
        }
        std::string phrase;
        switch (dir) {
            case Direction::Left: phrase = "to the left of"; break;
            case Direction::Right: phrase = "to the right of"; break;
            case Direction::Behind: phrase = "behind"; break;
            case Direction::Front: phrase = "in front of"; break;
        }
        PromptAndRoi out;
        out.prompt = "Show me " + phrase + " the " + obj.color_label + " " + obj.shape_label + ".";
        out.roi = roi;
        out.density = region_density(base, roi);
        return out;
    }
    throw Error("make_scene_prompt: no visible anchor with a nonempty region");
}

inline void accumulate(const std::vector<BenchRow>& rows, const std::string& method,
                       Aggregate* agg) {
    agg->method = method;
    double sm = 0, sv = 0, st = 0, sm2 = 0, sv2 = 0, st2 = 0;
    int succ = 0;
    for (const BenchRow& r : rows) {
        if (r.method != method) continue;
        ++agg->runs;
        succ += r.success ? 1 : 0;
        sm += r.objects_moved; sm2 += double(r.objects_moved) * r.objects_moved;
        sv += r.unique_viewpoints; sv2 += double(r.unique_viewpoints) * r.unique_viewpoints;
        st += r.synthetic_time_s; st2 += r.synthetic_time_s * r.synthetic_time_s;
    }
    if (agg->runs == 0) return;
    const double n = agg->runs;
    agg->success_rate = 100.0 * succ / n;
    agg->moved_mean = sm / n;
    agg->viewpoints_mean = sv / n;
    agg->time_mean = st / n;
    auto sdev = [&](double sum, double sum2) {
        const double var = std::max(0.0, sum2 / n - (sum / n) * (sum / n));
        return std::sqrt(var);
    };
    agg->moved_std = sdev(sm, sm2);
    agg->viewpoints_std = sdev(sv, sv2);
    agg->time_std = sdev(st, st2);
}

}  // namespace detail

// Equal-count bin edges (interior edges only) over the observed densities.
inline std::vector<double> density_terciles(const std::vector<BenchRow>& rows, int bins) {
    std::vector<double> d;
    for (const BenchRow& r : rows) d.push_back(r.density);
    std::sort(d.begin(), d.end());
    std::vector<double> edges;
    for (int b = 1; b < bins; ++b)
        edges.push_back(d.empty() ? 0.0 : d[d.size() * static_cast<size_t>(b) / bins]);
    return edges;
}

// Partition rows by density and aggregate per (bin, method). Empty bins keep
// their zero-count rows so the table shape is stable.
inline std::vector<StratumRow> stratify(const std::vector<BenchRow>& rows,
                                        const std::vector<double>& edges) {
    std::vector<double> lo{-kInf}, hi;
    for (double e : edges) {
        lo.push_back(e);
        hi.push_back(e);
    }
    hi.push_back(kInf);
    std::vector<std::string> methods;
    for (const BenchRow& r : rows)
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);

    std::vector<StratumRow> out;
    for (size_t b = 0; b < lo.size(); ++b)
        for (const std::string& m : methods) {
            StratumRow row;
            row.density_lo = lo[b];
            row.density_hi = hi[b];
            row.method = m;
            int succ = 0;
            double sm = 0, sv = 0;
            for (const BenchRow& r : rows) {
                if (r.method != m) continue;
                const bool in = r.density >= lo[b] && r.density < hi[b];
                if (!in) continue;
                ++row.runs;
                succ += r.success ? 1 : 0;
                sm += r.objects_moved;
                sv += r.unique_viewpoints;
            }
            if (row.runs > 0) {
                row.success_rate = 100.0 * succ / row.runs;
                row.moved_mean = sm / row.runs;
                row.viewpoints_mean = sv / row.runs;
            }
            out.push_back(row);
        }
    return out;
}

// Every method on every scene, shared per-scene prompt and seed. Failed runs
// become unsuccessful rows; they never abort the batch. Independent runs may
// execute on parallel workers; rows land in fixed slots so the result is
// schedule-independent.
inline BenchResult run_benchmark(const std::vector<Scene>& scenes,
                                 const std::vector<MethodSpec>& methods, const BenchConfig& cfg,
                                 uint64_t master_seed) {
    if (scenes.empty() || methods.empty()) throw Error("run_benchmark: need scenes and methods");
    std::vector<detail::PromptAndRoi> prompts(scenes.size());
    std::vector<std::string> prompt_errors(scenes.size());
    for (size_t i = 0; i < scenes.size(); ++i) {
        try {
            prompts[i] = detail::make_scene_prompt(scenes[i], cfg.pipeline.camera,
                                                   mix_seed(master_seed, i));
        } catch (const Error& e) {
            prompt_errors[i] = e.what();  // rows for this scene become failures
        }
    }

    BenchResult result;
    result.rows.resize(scenes.size() * methods.size());
    parallel_for(result.rows.size(), [&](size_t slot) {
        const size_t si = slot / methods.size();
        const size_t mi = slot % methods.size();
        BenchRow& row = result.rows[slot];
        row.scene_index = static_cast<int>(si);
        row.method = methods[mi].name;
        row.density = prompts[si].density;
        row.run_seed = mix_seed(master_seed, 0x72756e00ull + si);

        if (!prompt_errors[si].empty()) {
            row.success = false;
            row.failure_reason = prompt_errors[si];
            return;
        }
        PipelineConfig pcfg = cfg.pipeline;
        pcfg.scorer = methods[mi].scorer;
        pcfg.strategy = methods[mi].strategy;
        pcfg.seed = row.run_seed;
        try {
            Scene scene = scenes[si];  // fresh belief per run
            const RunReport rep = run_pipeline(scene, prompts[si].prompt, pcfg);
            row.success = rep.summary.success;
            row.final_coverage = rep.summary.final_coverage;
            row.unique_viewpoints = rep.summary.unique_viewpoints;
            row.objects_moved = rep.summary.objects_moved;
            row.synthetic_time_s = rep.summary.synthetic_time_s;
            row.failure_reason = rep.summary.failure_reason;
            row.planning_wall_s = rep.summary.planning_wall_s;
        } catch (const Error& e) {
            row.success = false;
            row.failure_reason = e.what();
        }
    });

    for (const MethodSpec& m : methods) {
        Aggregate agg;
        detail::accumulate(result.rows, m.name, &agg);
        result.aggregates.push_back(agg);
    }
    result.strata_edges = density_terciles(result.rows, cfg.strata_bins);
    result.strata = stratify(result.rows, result.strata_edges);
    return result;
}

// ---------------------------------------------------------------------------
// Emission: deterministic rows/summary plus a timing sidecar.

inline std::string bench_rows_csv(const BenchResult& r) {
    std::ostringstream out;
    out << "# ars-bench-rows v1\n";
    out << "scene,method,success,final_coverage,unique_viewpoints,objects_moved,"
           "synthetic_time_s,density,seed,failure_reason\n";
    for (const BenchRow& row : r.rows) {
        std::string reason = row.failure_reason;
        for (char& c : reason)
            if (c == ',' || c == '\n') c = ';';
        out << row.scene_index << ',' << row.method << ',' << (row.success ? 1 : 0) << ','
            << std::setprecision(17) << row.final_coverage << ',' << row.unique_viewpoints << ','
            << row.objects_moved << ',' << row.synthetic_time_s << ',' << row.density << ','
            << row.run_seed << ',' << reason << '\n';
    }
    return out.str();
}

inline nlohmann::json bench_summary_json(const BenchResult& r) {
    nlohmann::json doc;
    doc["version"] = "v1";
    nlohmann::json aggs = nlohmann::json::array();
    for (const Aggregate& a : r.aggregates)
        aggs.push_back({{"method", a.method},
                        {"runs", a.runs},
                        {"success_rate_pct", a.success_rate},
                        {"objects_moved", {{"mean", a.moved_mean}, {"std", a.moved_std}}},
                        {"viewpoints", {{"mean", a.viewpoints_mean}, {"std", a.viewpoints_std}}},
                        {"synthetic_time_s", {{"mean", a.time_mean}, {"std", a.time_std}}}});
    doc["aggregates"] = std::move(aggs);
    doc["strata_edges"] = r.strata_edges;
    nlohmann::json strata = nlohmann::json::array();
    for (const StratumRow& s : r.strata)
        strata.push_back({{"density_lo", std::isfinite(s.density_lo) ? s.density_lo : -1.0},
                          {"density_hi", std::isfinite(s.density_hi) ? s.density_hi : -1.0},
                          {"method", s.method},
                          {"runs", s.runs},
                          {"success_rate_pct", s.success_rate},
                          {"objects_moved_mean", s.moved_mean},
                          {"viewpoints_mean", s.viewpoints_mean}});
    doc["strata"] = std::move(strata);
    doc["note"] = "synthetic_time_s uses the declared action-cost model; it is not comparable "
                  "to wall-clock robot execution time";
    return doc;
}

inline std::string bench_timings_csv(const BenchResult& r) {
    std::ostringstream out;
    out << "# ars-bench-timings v1 (informational; wall-clock, not deterministic)\n";
    out << "scene,method,planning_wall_s\n";
    for (const BenchRow& row : r.rows)
        out << row.scene_index << ',' << row.method << ',' << row.planning_wall_s << '\n';
    return out.str();
}

}  // namespace ars
