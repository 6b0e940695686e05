#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ars/camera.hpp"
#include "ars/scene.hpp"

namespace ars {

// The shelf is open only at its front face (y = min). Rays starting outside
// the grid may enter solely through that face; any other face acts as a wall.
enum class RayOutcome : uint8_t { Miss = 0, Hit = 1, Wall = 2 };

struct RayResult {
    RayOutcome outcome = RayOutcome::Miss;
    int32_t object_id = kFreeVoxel;  // valid when outcome == Hit
    uint32_t hit_voxel = 0;          // linear index, valid when outcome == Hit
    double distance = kInf;          // ray parameter at the hit/wall boundary
};

namespace detail {

// Incremental grid traversal (Amanatides-Woo). Calls fn(linear, t_entry) for
// every free voxel entered at t_entry <= max_range, in ray order, and stops
// at the first ground-truth-occupied voxel (reported via the return value,
// not passed to fn). dir must be unit length.
template <typename VoxelFn>
RayResult traverse_ray(const Scene& scene, const Vec3& origin, const Vec3& dir, double max_range,
                       VoxelFn&& fn) {
    const GridSpec& spec = scene.spec;
    const Aabb box = spec.world_box();
    RayResult res;

    double t = 0.0;
    Index3 v;
    if (box.contains(origin)) {
        v = spec.voxel_of(origin);
        v = {std::min(v.x, spec.dims.x - 1), std::min(v.y, spec.dims.y - 1),
             std::min(v.z, spec.dims.z - 1)};
    } else {
        const auto slab = slab_intersect(origin, dir, box);
        if (!slab || slab->t_far < 0.0 || slab->t_near > max_range) return res;
        t = std::max(slab->t_near, 0.0);
        // Open-front rule: entry must cross the y-min plane going inward.
        if (!(slab->near_axis == 1 && dir.y > 0.0)) {
            res.outcome = RayOutcome::Wall;
            res.distance = t;
            return res;
        }
        const Vec3 p = origin + dir * t;
        v = spec.voxel_of(p);
        // Entry lands exactly on the front plane; nudge indices into range.
        v = {std::clamp(v.x, 0, spec.dims.x - 1), std::max(v.y, 0),
             std::clamp(v.z, 0, spec.dims.z - 1)};
    }

    Index3 step;
    Vec3 t_max, t_delta;
    for (int a = 0; a < 3; ++a) {
        const double d = dir[a];
        if (d > 0.0) {
            step.axis(a) = 1;
            t_delta.axis(a) = spec.resolution / d;
            t_max.axis(a) = ((v[a] + 1) * spec.resolution + spec.origin[a] - origin[a]) / d;
        } else if (d < 0.0) {
            step.axis(a) = -1;
            t_delta.axis(a) = -spec.resolution / d;
            t_max.axis(a) = (v[a] * spec.resolution + spec.origin[a] - origin[a]) / d;
        } else {
            step.axis(a) = 0;
            t_delta.axis(a) = kInf;
            t_max.axis(a) = kInf;
        }
    }

    while (true) {
        if (t > max_range) return res;  // next voxel would start beyond range
        const size_t lin = spec.linear(v);
        const int32_t occ = scene.truth[lin];
        if (occ != kFreeVoxel) {
            res.outcome = RayOutcome::Hit;
            res.object_id = occ;
            res.hit_voxel = static_cast<uint32_t>(lin);
            res.distance = t;
            return res;
        }
        fn(static_cast<uint32_t>(lin), t);

        // Advance to the neighbor across the nearest voxel face.
        int axis = 0;
        if (t_max.y < t_max[axis]) axis = 1;
        if (t_max.z < t_max[axis]) axis = 2;
        t = t_max[axis];
        v.axis(axis) += step[axis];
        if (v[axis] < 0 || v[axis] >= spec.dims[axis]) return res;  // exited the grid
        t_max.axis(axis) += t_delta[axis];
    }
}

}  // namespace detail

struct Traversal {
    std::vector<Index3> voxels;      // traversed voxels in ray order (hit voxel included)
    int32_t hit_object = kFreeVoxel; // kFreeVoxel when no hit
    double hit_distance = kInf;
    RayOutcome outcome = RayOutcome::Miss;
};

// Single-ray query. dir must be unit length within 1e-9. Stops at the first
// ground-truth-occupied voxel, grid exit, or max_range.
inline Traversal cast_ray(const Scene& scene, const Vec3& origin, const Vec3& dir,
                          double max_range = kInf) {
    if (std::abs(norm(dir) - 1.0) > 1e-9)
        throw Error("cast_ray: direction must be unit length");
    if (scene.spec.world_box().contains(origin)) {
        const Index3 v = scene.spec.voxel_of(origin);
        if (scene.spec.contains(v) && scene.occupied(scene.spec.linear(v)))
            throw OriginInsideOccupied("cast_ray: origin voxel is occupied");
    }
    Traversal out;
    const RayResult res = detail::traverse_ray(
        scene, origin, dir, max_range,
        [&](uint32_t lin, double) { out.voxels.push_back(scene.spec.unlinear(lin)); });
    out.outcome = res.outcome;
    if (res.outcome == RayOutcome::Hit) {
        out.voxels.push_back(scene.spec.unlinear(res.hit_voxel));
        out.hit_object = res.object_id;
        out.hit_distance = res.distance;
    } else if (res.outcome == RayOutcome::Wall) {
        out.hit_distance = res.distance;
    }
    return out;
}

// One synthetic depth frame: per-pixel range (+inf for misses) and the id of
// the object hit (kFreeVoxel for none).
struct DepthImage {
    int width = 0, height = 0;
    std::vector<double> depth;
    std::vector<int32_t> hit_object;
    std::vector<uint32_t> hit_voxel;  // linear index; only valid where hit_object != kFreeVoxel

    double at(int col, int row) const { return depth[static_cast<size_t>(row) * width + col]; }
};

struct Observation {
    DepthImage image;
    size_t newly_observed = 0;   // voxels that left Unknown during this call
    double grid_coverage = 0.0;  // fraction of all grid voxels observed after the update
};

inline bool viewpoint_valid(const Scene& scene, const Viewpoint& v) {
    if (v.pitch < -M_PI / 2 || v.pitch > M_PI / 2) return false;
    if (!scene.spec.world_box().contains(v.position)) return true;
    const Index3 cell = scene.spec.voxel_of(v.position);
    if (!scene.spec.contains(cell)) return true;
    return !scene.occupied(scene.spec.linear(cell));
}

namespace detail {

// Shared ray loop for observe/render/oracle: per-pixel traversal with a
// caller-supplied belief write. BeliefFn(linear, occupied_hit) is invoked for
// free voxels (occupied_hit=false) and the terminating hit voxel (true).
template <typename BeliefFn>
DepthImage sweep_frustum(const Scene& scene, const Viewpoint& v, const CameraConfig& cam,
                         BeliefFn&& update) {
    const CameraConfig::Basis basis = cam.basis(v);
    DepthImage img;
    img.width = cam.width;
    img.height = cam.height;
    img.depth.assign(static_cast<size_t>(cam.width) * cam.height, kInf);
    img.hit_object.assign(img.depth.size(), kFreeVoxel);
    img.hit_voxel.assign(img.depth.size(), 0);
    for (int row = 0; row < cam.height; ++row)
        for (int col = 0; col < cam.width; ++col) {
            const Vec3 dir = CameraConfig::pixel_dir(basis, col, row, cam.width, cam.height);
            const RayResult res =
                traverse_ray(scene, v.position, dir, cam.max_range,
                             [&](uint32_t lin, double) { update(lin, false); });
            const size_t px = static_cast<size_t>(row) * cam.width + col;
            if (res.outcome == RayOutcome::Hit) {
                img.depth[px] = res.distance;
                img.hit_object[px] = res.object_id;
                img.hit_voxel[px] = res.hit_voxel;
                update(res.hit_voxel, true);
            } else if (res.outcome == RayOutcome::Wall) {
                img.depth[px] = res.distance;
            }
        }
    return img;
}

}  // namespace detail

// Pure depth render: no belief mutation. Used by blocking-score analysis and
// the hypothetical-observation scorers.
inline DepthImage render_view(const Scene& scene, const Viewpoint& v, const CameraConfig& cam) {
    cam.validate();
    if (!viewpoint_valid(scene, v))
        throw InvalidViewpoint("render_view: camera position inside an occupied voxel");
    return detail::sweep_frustum(scene, v, cam, [](uint32_t, bool) {});
}

// Casts the full pixel grid from v and integrates the result into the scene
// belief: traversed free voxels become ObservedFree, terminating occupied
// voxels ObservedOccupied.
inline Observation observe(Scene& scene, const Viewpoint& v, const CameraConfig& cam) {
    cam.validate();
    if (!viewpoint_valid(scene, v))
        throw InvalidViewpoint("observe: camera position inside an occupied voxel");
    Observation obs;
    obs.image = detail::sweep_frustum(scene, v, cam, [&](uint32_t lin, bool occupied_hit) {
        BeliefState& s = scene.belief.states[lin];
        const BeliefState next = occupied_hit ? BeliefState::ObservedOccupied
                                              : BeliefState::ObservedFree;
        if (s == BeliefState::Unknown) ++obs.newly_observed;
        s = next;
    });
    obs.grid_coverage =
        static_cast<double>(scene.belief.observed_count()) / scene.spec.voxel_count();
    return obs;
}

// Eq.-style coverage rate: fraction of ROI voxels that have been observed.
inline double coverage(const VoxelBelief& belief, const RoiBox& roi) {
    if (roi.lo.x > roi.hi.x || roi.lo.y > roi.hi.y || roi.lo.z > roi.hi.z)
        throw EmptyRoi("coverage: empty ROI");
    const Index3 dims = belief.dims;
    if (roi.lo.x < 0 || roi.lo.y < 0 || roi.lo.z < 0 || roi.hi.x >= dims.x ||
        roi.hi.y >= dims.y || roi.hi.z >= dims.z)
        throw EmptyRoi("coverage: ROI outside grid bounds");
    size_t seen = 0;
    for (int x = roi.lo.x; x <= roi.hi.x; ++x)
        for (int y = roi.lo.y; y <= roi.hi.y; ++y) {
            const size_t base = (static_cast<size_t>(x) * dims.y + y) * dims.z;
            for (int z = roi.lo.z; z <= roi.hi.z; ++z)
                if (belief.states[base + z] != BeliefState::Unknown) ++seen;
        }
    return static_cast<double>(seen) / static_cast<double>(roi.volume_voxels());
}

}  // namespace ars
