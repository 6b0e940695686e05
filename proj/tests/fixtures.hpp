// Shared scene fixtures and exhaustive oracles for the unit and acceptance
// suites. Everything here is independent of the implementation paths it is
// used to check.
#pragma once

#include <map>

#include "ars/pipeline.hpp"
#include "ars/scene_gen.hpp"
#include "ars/scorer.hpp"

namespace ars::fixtures {

inline void add_box_voxels(Scene& scene, Index3 lo, Index3 hi, const char* color,
                           SizeCategory cat = SizeCategory::Large) {
    SceneObject obj;
    obj.shape = ShapeKind::Box;
    obj.category = cat;
    const double r = scene.spec.resolution;
    obj.size = {(hi.x - lo.x + 1) * r - 1e-9, (hi.y - lo.y + 1) * r - 1e-9,
                (hi.z - lo.z + 1) * r - 1e-9};
    obj.pose.position = {scene.spec.origin.x + 0.5 * (lo.x + hi.x + 1) * r,
                         scene.spec.origin.y + 0.5 * (lo.y + hi.y + 1) * r,
                         scene.spec.origin.z + 0.5 * (lo.z + hi.z + 1) * r};
    obj.color_label = color;
    obj.shape_label = "box";
    if (!scene.try_add_object(obj)) throw Error("fixture: box placement failed");
}

// A shelf whose front is sealed by a wall of boxes except for one randomly
// placed opening; the region behind the wall is only visible through it.
struct SingleOpeningScene {
    Scene scene;
    RoiBox roi;
};

inline SingleOpeningScene single_opening_scene(uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6f70656eull));
    GridSpec spec;
    spec.dims = {40 + rng.uniform_int(0, 8), 24 + rng.uniform_int(0, 6), 10};
    spec.resolution = 0.02;
    spec.origin = {-0.5 * spec.dims.x * spec.resolution, 0.4, 0.3};
    SingleOpeningScene out{Scene::empty(spec), {}};
    Scene& scene = out.scene;

    const int wall_y0 = 6, wall_y1 = 9;
    const int wall_top = spec.dims.z - 2;
    const int gap_w = 7;
    const int gap_x = rng.uniform_int(2, spec.dims.x - gap_w - 2);
    if (gap_x > 0)
        add_box_voxels(scene, {0, wall_y0, 0}, {gap_x - 1, wall_y1, wall_top}, "red");
    if (gap_x + gap_w < spec.dims.x)
        add_box_voxels(scene, {gap_x + gap_w, wall_y0, 0},
                       {spec.dims.x - 1, wall_y1, wall_top}, "blue");
    // A few small items behind the wall for structure.
    for (int i = 0; i < 3; ++i) {
        const int bx = rng.uniform_int(2, spec.dims.x - 5);
        const int by = rng.uniform_int(wall_y1 + 3, spec.dims.y - 4);
        add_box_voxels(scene, {bx, by, 0}, {bx + 2, by + 2, 3}, "green", SizeCategory::Small);
    }
    out.roi = {{0, wall_y1 + 1, 0}, {spec.dims.x - 1, spec.dims.y - 1, spec.dims.z - 1}};
    return out;
}

// Exhaustive 5-DOF reference: a lattice over the frontal approach box crossed
// with yaw/pitch grids, scored by the same scorer the planner uses.
inline double grid_search_best(const Scene& scene, const CoverageScorer& scorer,
                               const ViewpointBounds& bounds, int nx = 9, int ny = 9, int nz = 5,
                               int n_yaw = 8, int n_pitch = 3) {
    const ViewpointSpace space(scene, bounds);
    const Aabb box = space.approach_box();
    double best = -kInf;
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int iz = 0; iz < nz; ++iz)
                for (int iw = 0; iw < n_yaw; ++iw)
                    for (int ip = 0; ip < n_pitch; ++ip) {
                        Viewpoint v;
                        v.position = {
                            box.lo.x + (ix + 0.5) / nx * (box.hi.x - box.lo.x),
                            box.lo.y + (iy + 0.5) / ny * (box.hi.y - box.lo.y),
                            box.lo.z + (iz + 0.5) / nz * (box.hi.z - box.lo.z)};
                        v.yaw = bounds.yaw_lo +
                                (iw + 0.5) / n_yaw * (bounds.yaw_hi - bounds.yaw_lo);
                        v.pitch = bounds.pitch_lo +
                                  (ip + 0.5) / n_pitch * (bounds.pitch_hi - bounds.pitch_lo);
                        best = std::max(best, scorer.score(v));
                    }
    return best;
}

// A scene with one dominant occluder in front of the region behind the
// anchor, plus clutter elsewhere; used by the blocking-utility checks.
struct OccluderScene {
    Scene scene;
    RoiBox roi;
    int32_t anchor_id = 0;
    int32_t occluder_id = 1;
};

inline OccluderScene dominant_occluder_scene(uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6f63636cull));
    GridSpec spec;
    spec.dims = {44 + rng.uniform_int(0, 8), 28 + rng.uniform_int(0, 6), 12};
    spec.resolution = 0.02;
    spec.origin = {-0.5 * spec.dims.x * spec.resolution, 0.35, 0.3};
    OccluderScene out{Scene::empty(spec), {}, 0, 1};
    Scene& scene = out.scene;

    // Anchor: a small frontmost box, always visible from the home pose. The
    // requested region is everything behind it.
    const int ax = rng.uniform_int(4, spec.dims.x - 8);
    add_box_voxels(scene, {ax, 2, 0}, {ax + 3, 5, 4}, "pink", SizeCategory::Small);
    out.anchor_id = 0;

    // Dominant occluder: a full-height box covering most of the width,
    // sitting inside the region and shadowing the slab behind it.
    const int ow = static_cast<int>(0.75 * spec.dims.x);
    const int ox = rng.uniform_int(1, spec.dims.x - ow - 2);
    add_box_voxels(scene, {ox, 9, 0}, {ox + ow, 12, spec.dims.z - 1}, "red",
                   SizeCategory::Large);
    out.occluder_id = 1;

    // Small clutter deep in the region.
    for (int i = 0; i < 4; ++i) {
        const int cx = rng.uniform_int(1, spec.dims.x - 4);
        const int cy = rng.uniform_int(18, spec.dims.y - 4);
        SceneObject obj;
        obj.shape = ShapeKind::Cylinder;
        obj.category = SizeCategory::Small;
        obj.size = {0.05, 0.05, 0.06};
        obj.pose.position = scene.spec.voxel_center({cx, cy, 2});
        obj.pose.position.z = scene.spec.origin.z + 0.03 + 1e-4;
        obj.color_label = "green";
        obj.shape_label = "cylinder";
        scene.try_add_object(obj);  // clutter may fail to place; that is fine
    }
    out.roi = build_roi(scene, out.anchor_id, Direction::Behind);
    return out;
}

// Shadow-volume oracle: for each region voxel, march the straight line from
// the camera to its center; the first object hit (if any) shadows it. Returns
// occluded-voxel counts per object id.
inline std::map<int32_t, size_t> shadow_volume_counts(const Scene& scene, const RoiBox& roi,
                                                      const Viewpoint& v) {
    std::map<int32_t, size_t> counts;
    for (int x = roi.lo.x; x <= roi.hi.x; ++x)
        for (int y = roi.lo.y; y <= roi.hi.y; ++y)
            for (int z = roi.lo.z; z <= roi.hi.z; ++z) {
                const Vec3 target = scene.spec.voxel_center({x, y, z});
                if (scene.truth[scene.spec.linear({x, y, z})] != kFreeVoxel) continue;
                const Vec3 diff = target - v.position;
                const double dist = norm(diff);
                const Vec3 dir = diff / dist;
                const double step = scene.spec.resolution / 8.0;
                int32_t hit = kFreeVoxel;
                for (double t = step; t < dist - step; t += step) {
                    const Index3 cell = scene.spec.voxel_of(v.position + dir * t);
                    if (!scene.spec.contains(cell)) continue;
                    if (cell.x == x && cell.y == y && cell.z == z) break;
                    const int32_t occ = scene.truth[scene.spec.linear(cell)];
                    if (occ != kFreeVoxel) {
                        hit = occ;
                        break;
                    }
                }
                if (hit != kFreeVoxel) ++counts[hit];
            }
    return counts;
}

}  // namespace ars::fixtures
