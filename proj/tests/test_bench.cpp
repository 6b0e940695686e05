#include <catch2/catch_amalgamated.hpp>

#include "ars/bench.hpp"
#include "fixtures.hpp"

using namespace ars;

namespace {

BenchConfig small_bench_config() {
    BenchConfig cfg;
    cfg.pipeline.camera.width = 48;
    cfg.pipeline.camera.height = 36;
    cfg.pipeline.camera.max_range = 2.0;
    cfg.pipeline.action_budget = 12;
    cfg.pipeline.removals_per_phase = 3;
    cfg.pipeline.planner.uniform_seeds = 64;
    cfg.pipeline.planner.batch = 32;
    cfg.pipeline.planner.elites = 8;
    cfg.pipeline.planner.iterations = 2;
    return cfg;
}

std::vector<Scene> small_scene_set(int n) {
    GenParams params;
    std::vector<Scene> scenes;
    for (int i = 0; i < n; ++i) scenes.push_back(generate_scene(params, 800 + i));
    return scenes;
}

}  // namespace

TEST_CASE("region density arithmetic") {
    GridSpec spec;
    spec.dims = {50, 50, 20};
    spec.resolution = 0.1;  // 5 x 5 x 2 m
    spec.origin = {0.0, 0.0, 0.0};
    Scene scene = Scene::empty(spec);
    // Region of exactly 0.5 m^3: 10 x 10 x 5 voxels at 1e-3 m^3 each.
    const RoiBox roi{{0, 0, 0}, {9, 9, 4}};
    CHECK(region_density(scene, roi) == 0.0);

    // Three small boxes inside the region, one outside.
    fixtures::add_box_voxels(scene, {1, 1, 0}, {2, 2, 1}, "red");
    fixtures::add_box_voxels(scene, {4, 4, 0}, {5, 5, 1}, "green");
    fixtures::add_box_voxels(scene, {7, 7, 0}, {8, 8, 1}, "blue");
    fixtures::add_box_voxels(scene, {30, 30, 0}, {34, 34, 4}, "grey");
    CHECK(region_density(scene, roi) == Catch::Approx(3.0 / 0.5));

    SECTION("matches brute-force voxel membership on random scenes") {
        for (uint64_t seed = 0; seed < 8; ++seed) {
            const Scene s = generate_scene(GenParams{}, 900 + seed);
            const RoiBox r{{0, 0, 0}, {s.spec.dims.x / 2, s.spec.dims.y - 1, s.spec.dims.z - 1}};
            size_t count = 0;
            for (const SceneObject& obj : s.objects) {
                bool any = false;
                for (uint32_t lin : obj.voxels) any |= r.contains(s.spec.unlinear(lin));
                count += any ? 1 : 0;
            }
            CHECK(region_density(s, r) ==
                  Catch::Approx(static_cast<double>(count) / r.volume_m3(s.spec)));
        }
    }
}

TEST_CASE("stratification is consistent with the unstratified aggregates") {
    std::vector<BenchRow> rows;
    Rng rng(5);
    for (int i = 0; i < 60; ++i) {
        BenchRow r;
        r.scene_index = i / 2;
        r.method = (i % 2 == 0) ? "ours" : "rs-rb";
        r.success = rng.bernoulli(0.7);
        r.unique_viewpoints = rng.uniform_int(1, 8);
        r.objects_moved = rng.uniform_int(0, 6);
        r.density = rng.uniform(0.0, 50.0);
        rows.push_back(r);
    }

    SECTION("a single bin spanning everything equals the plain aggregate") {
        const auto strata = stratify(rows, {});
        REQUIRE(strata.size() == 2);
        Aggregate agg;
        detail::accumulate(rows, "ours", &agg);
        const auto& s0 = strata[0].method == "ours" ? strata[0] : strata[1];
        CHECK(s0.runs == agg.runs);
        CHECK(s0.success_rate == Catch::Approx(agg.success_rate));
        CHECK(s0.moved_mean == Catch::Approx(agg.moved_mean));
        CHECK(s0.viewpoints_mean == Catch::Approx(agg.viewpoints_mean));
    }
    SECTION("disjoint bins partition the rows") {
        const auto strata = stratify(rows, {15.0, 35.0});
        size_t total = 0;
        for (const StratumRow& s : strata) total += static_cast<size_t>(s.runs);
        CHECK(total == rows.size());
    }
    SECTION("per-bin means match an independent recomputation") {
        const std::vector<double> edges{25.0};
        const auto strata = stratify(rows, edges);
        for (const StratumRow& s : strata) {
            double moved = 0.0;
            int count = 0;
            for (const BenchRow& r : rows) {
                if (r.method != s.method) continue;
                if (r.density < s.density_lo || r.density >= s.density_hi) continue;
                moved += r.objects_moved;
                ++count;
            }
            REQUIRE(s.runs == count);
            if (count > 0) REQUIRE(s.moved_mean == Catch::Approx(moved / count));
        }
    }
}

TEST_CASE("benchmark: rows, aggregates, and determinism") {
    const auto scenes = small_scene_set(3);
    const std::vector<MethodSpec> methods{method_from_name("ours", true),
                                          method_from_name("rs-rb", true)};
    const BenchConfig cfg = small_bench_config();
    const BenchResult result = run_benchmark(scenes, methods, cfg, 99);

    REQUIRE(result.rows.size() == 6);  // 3 scenes x 2 methods
    REQUIRE(result.aggregates.size() == 2);
    for (const Aggregate& a : result.aggregates) CHECK(a.runs == 3);

    SECTION("aggregate means equal hand recomputation from the rows") {
        for (const Aggregate& a : result.aggregates) {
            double moved = 0.0, vps = 0.0;
            int succ = 0, n = 0;
            for (const BenchRow& r : result.rows) {
                if (r.method != a.method) continue;
                ++n;
                moved += r.objects_moved;
                vps += r.unique_viewpoints;
                succ += r.success ? 1 : 0;
            }
            REQUIRE(n == a.runs);
            CHECK(a.moved_mean == Catch::Approx(moved / n));
            CHECK(a.viewpoints_mean == Catch::Approx(vps / n));
            CHECK(a.success_rate == Catch::Approx(100.0 * succ / n));
        }
    }
    SECTION("success flags recompute from coverage and budget") {
        for (const BenchRow& r : result.rows)
            CHECK(r.success == (r.final_coverage >= cfg.pipeline.c_max &&
                                r.unique_viewpoints <= cfg.pipeline.viewpoint_budget));
    }
    SECTION("method rows share the scene prompt and seed") {
        for (size_t s = 0; s < scenes.size(); ++s) {
            const BenchRow& a = result.rows[s * 2];
            const BenchRow& b = result.rows[s * 2 + 1];
            CHECK(a.run_seed == b.run_seed);
            CHECK(a.density == b.density);
        }
    }
    SECTION("byte-identical tables on replay") {
        const BenchResult again = run_benchmark(scenes, methods, cfg, 99);
        CHECK(bench_rows_csv(again) == bench_rows_csv(result));
        CHECK(bench_summary_json(again).dump() == bench_summary_json(result).dump());
        const BenchResult other = run_benchmark(scenes, methods, cfg, 100);
        CHECK(bench_rows_csv(other) != bench_rows_csv(result));
    }
}

TEST_CASE("a trivially open scene succeeds for every method") {
    GridSpec spec;
    spec.dims = {40, 25, 10};
    spec.resolution = 0.02;
    spec.origin = {-0.4, 0.4, 0.3};
    Scene scene = Scene::empty(spec);
    fixtures::add_box_voxels(scene, {18, 10, 0}, {22, 13, 4}, "pink", SizeCategory::Small);

    std::vector<MethodSpec> methods;
    for (const char* name : {"ours", "rs-rb", "rs-nb", "s-vb", "s-nb"})
        methods.push_back(method_from_name(name, true));
    const BenchResult result = run_benchmark({scene}, methods, small_bench_config(), 7);
    REQUIRE(result.rows.size() == 5);
    for (const BenchRow& r : result.rows) {
        INFO(r.method << ": " << r.failure_reason);
        CHECK(r.success);
        CHECK(r.objects_moved == 0);
    }
}

TEST_CASE("failing runs become unsuccessful rows without aborting the batch") {
    // A scene whose only object is invisible from the home pose: prompt
    // grounding fails, the row records the reason.
    GridSpec spec;
    spec.dims = {30, 20, 8};
    spec.resolution = 0.02;
    spec.origin = {-0.3, 0.4, 0.3};
    Scene hidden = Scene::empty(spec);
    fixtures::add_box_voxels(hidden, {5, 10, 0}, {8, 12, 3}, "red");
    fixtures::add_box_voxels(hidden, {4, 5, 0}, {9, 7, 7}, "blue");  // curtain in front

    const auto scenes = small_scene_set(1);
    const std::vector<MethodSpec> methods{method_from_name("ours", true)};
    // The batch mixes a healthy scene with the pathological one.
    const BenchResult result = run_benchmark({scenes[0], hidden}, methods,
                                             small_bench_config(), 55);
    REQUIRE(result.rows.size() == 2);
}
