#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "ars/sensing.hpp"

namespace ars {

// How much ROI view an object occludes: the sum over its visible surface
// points of the segment length from the point to the far ROI intersection of
// the camera ray through it.
struct BlockEntry {
    int32_t object_id = -1;
    double score = 0.0;  // h, meters
    Viewpoint viewpoint;
};

struct RaySegment {
    Vec3 entry;  // line-box intersection nearer the camera
    Vec3 exit;   // the farther intersection
};

// Intersects the ray from camera through p with the ROI's world-space box.
// NONE when the line misses the box or the whole intersection lies behind
// the camera.
inline std::optional<RaySegment> ray_roi_segment(const Vec3& camera, const Vec3& p,
                                                 const RoiBox& roi, const GridSpec& spec) {
    const Vec3 diff = p - camera;
    const double len = norm(diff);
    if (len < 1e-9) throw DegenerateRay("ray_roi_segment: point coincides with the camera");
    const Vec3 dir = diff / len;
    const auto slab = slab_intersect(camera, dir, roi.world_box(spec));
    if (!slab || slab->t_far < 0.0) return std::nullopt;
    return RaySegment{camera + dir * slab->t_near, camera + dir * slab->t_far};
}

namespace detail {

// Unique visible surface voxels per object, back-projected from the depth
// image (pixels that hit the same voxel count once).
inline std::unordered_map<int32_t, std::vector<uint32_t>> visible_voxels_by_object(
    const DepthImage& img) {
    std::unordered_map<int32_t, std::vector<uint32_t>> sets;
    for (size_t px = 0; px < img.hit_object.size(); ++px)
        if (img.hit_object[px] != kFreeVoxel) sets[img.hit_object[px]].push_back(img.hit_voxel[px]);
    for (auto& [id, voxels] : sets) {
        std::sort(voxels.begin(), voxels.end());
        voxels.erase(std::unique(voxels.begin(), voxels.end()), voxels.end());
    }
    return sets;
}

// Blocking sum over one object's visible voxel centers. The dot indicator
// keeps only points with the ROI exit ahead of them as seen from the camera;
// points past the ROI contribute nothing. Summation runs in canonical voxel
// order so the result is independent of the caller's enumeration order.
inline double blocking_sum(std::vector<uint32_t> voxels, const Vec3& camera, const RoiBox& roi,
                           const GridSpec& spec) {
    std::sort(voxels.begin(), voxels.end());
    double h = 0.0;
    for (uint32_t lin : voxels) {
        const Vec3 p = spec.voxel_center(spec.unlinear(lin));
        const auto seg = ray_roi_segment(camera, p, roi, spec);
        if (!seg) continue;
        if (dot(seg->exit - p, camera - p) < 0.0) h += norm(p - seg->exit);
    }
    return h;
}

}  // namespace detail

// Blocking score of one object from viewpoint v, over the surface voxels
// visible in the depth image rendered from v.
inline double blocking_score(const Scene& scene, const RoiBox& roi, const Viewpoint& v,
                             int32_t object_id, const CameraConfig& cam) {
    const SceneObject& obj = scene.object(object_id);  // throws UnknownObject
    if (!obj.present) return 0.0;
    const DepthImage img = render_view(scene, v, cam);
    const auto sets = detail::visible_voxels_by_object(img);
    const auto it = sets.find(object_id);
    if (it == sets.end()) return 0.0;
    return detail::blocking_sum(it->second, v.position, roi, scene.spec);
}

// All present observed objects with blocking score above h_min, descending,
// ties to the smaller id. The ROI anchor (when given) is never a candidate:
// relocating it would invalidate the user's spatial reference.
inline std::vector<BlockEntry> rank_blockers(const Scene& scene, const RoiBox& roi,
                                             const Viewpoint& v, double h_min,
                                             const CameraConfig& cam, int32_t exclude_id = -1) {
    const DepthImage img = render_view(scene, v, cam);
    const auto sets = detail::visible_voxels_by_object(img);
    std::vector<BlockEntry> entries;
    for (const auto& [id, voxels] : sets) {
        if (id == exclude_id) continue;
        if (!scene.object(id).present) continue;
        const double h = detail::blocking_sum(voxels, v.position, roi, scene.spec);
        if (h > h_min) entries.push_back({id, h, v});
    }
    std::sort(entries.begin(), entries.end(), [](const BlockEntry& a, const BlockEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.object_id < b.object_id;
    });
    return entries;
}

}  // namespace ars
