#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ars/errors.hpp"
#include "ars/grid.hpp"

namespace ars {

constexpr int32_t kFreeVoxel = -1;

enum class BeliefState : uint8_t { Unknown = 0, ObservedFree = 1, ObservedOccupied = 2 };

// Per-voxel knowledge state. The non-Unknown subset is the observed region.
struct VoxelBelief {
    Index3 dims;
    std::vector<BeliefState> states;

    static VoxelBelief unknown(const GridSpec& spec) {
        return {spec.dims, std::vector<BeliefState>(spec.voxel_count(), BeliefState::Unknown)};
    }

    BeliefState at(size_t linear) const { return states[linear]; }
    size_t observed_count() const {
        return static_cast<size_t>(
            std::count_if(states.begin(), states.end(),
                          [](BeliefState s) { return s != BeliefState::Unknown; }));
    }
};

enum class ShapeKind : uint8_t { Box = 0, Cylinder = 1 };
enum class SizeCategory : uint8_t { Large = 0, Small = 1 };

struct ObjectPose {
    Vec3 position;  // shape center, world meters
    double yaw = 0.0;
};

// A household item: box or upright cylinder. size is (sx, sy, sz) full
// extents for boxes and (diameter, diameter, height) for cylinders.
struct SceneObject {
    int32_t id = 0;
    ShapeKind shape = ShapeKind::Box;
    ObjectPose pose;
    Vec3 size;
    std::string color_label;
    std::string shape_label;
    SizeCategory category = SizeCategory::Small;
    std::vector<uint32_t> voxels;  // linear indices, sorted; derived
    bool present = true;

    // Inclusive voxel-index bounding box of the occupied set.
    void voxel_bbox(const GridSpec& spec, Index3* lo, Index3* hi) const {
        *lo = {spec.dims.x, spec.dims.y, spec.dims.z};
        *hi = {-1, -1, -1};
        for (uint32_t lin : voxels) {
            const Index3 v = spec.unlinear(lin);
            lo->x = std::min(lo->x, v.x); lo->y = std::min(lo->y, v.y); lo->z = std::min(lo->z, v.z);
            hi->x = std::max(hi->x, v.x); hi->y = std::max(hi->y, v.y); hi->z = std::max(hi->z, v.z);
        }
    }
};

// Tight world-frame half-extents of the posed shape.
inline Vec3 world_half_extents(const SceneObject& obj) {
    if (obj.shape == ShapeKind::Cylinder) {
        const double r = 0.5 * obj.size.x;
        return {r, r, 0.5 * obj.size.z};
    }
    const double c = std::abs(std::cos(obj.pose.yaw)), s = std::abs(std::sin(obj.pose.yaw));
    return {0.5 * (c * obj.size.x + s * obj.size.y), 0.5 * (s * obj.size.x + c * obj.size.y),
            0.5 * obj.size.z};
}

// Voxel-center-inside-primitive test.
inline bool point_inside_object(const SceneObject& obj, const Vec3& p) {
    const Vec3 d = p - obj.pose.position;
    if (obj.shape == ShapeKind::Cylinder) {
        const double r = 0.5 * obj.size.x;
        if (std::abs(d.z) > 0.5 * obj.size.z) return false;
        return d.x * d.x + d.y * d.y <= r * r;
    }
    // Box: rotate the offset into the object frame (yaw about Z).
    const double c = std::cos(-obj.pose.yaw), s = std::sin(-obj.pose.yaw);
    const double lx = c * d.x - s * d.y;
    const double ly = s * d.x + c * d.y;
    return std::abs(lx) <= 0.5 * obj.size.x && std::abs(ly) <= 0.5 * obj.size.y &&
           std::abs(d.z) <= 0.5 * obj.size.z;
}

// All voxels whose centers lie inside the posed primitive, clipped to the
// grid. Sorted linear indices.
inline std::vector<uint32_t> voxelize_object(const SceneObject& obj, const GridSpec& spec) {
    if (obj.size.x <= 0.0 || obj.size.y <= 0.0 || obj.size.z <= 0.0)
        throw DegenerateShape("voxelize_object: size parameters must be > 0 for object " +
                              std::to_string(obj.id));
    const Vec3 half = world_half_extents(obj);
    const Vec3 lo_w = obj.pose.position - half;
    const Vec3 hi_w = obj.pose.position + half;
    Index3 lo = spec.voxel_of(lo_w), hi = spec.voxel_of(hi_w);
    lo = {std::max(lo.x, 0), std::max(lo.y, 0), std::max(lo.z, 0)};
    hi = {std::min(hi.x, spec.dims.x - 1), std::min(hi.y, spec.dims.y - 1),
          std::min(hi.z, spec.dims.z - 1)};

    std::vector<uint32_t> out;
    for (int x = lo.x; x <= hi.x; ++x)
        for (int y = lo.y; y <= hi.y; ++y)
            for (int z = lo.z; z <= hi.z; ++z) {
                const Index3 v{x, y, z};
                if (point_inside_object(obj, spec.voxel_center(v)))
                    out.push_back(static_cast<uint32_t>(spec.linear(v)));
            }
    std::sort(out.begin(), out.end());
    return out;
}

// The dual-layer world: ground-truth occupancy plus the belief accumulated by
// observations. Value type; single-writer mutation, shareable read-only.
struct Scene {
    GridSpec spec;
    std::vector<int32_t> truth;  // occupant object id, or kFreeVoxel
    VoxelBelief belief;
    std::vector<SceneObject> objects;  // registry; objects[i].id == i
    std::vector<int32_t> staging;      // removed object ids, in removal order

    static Scene empty(const GridSpec& spec) {
        spec.validate();
        Scene s;
        s.spec = spec;
        s.truth.assign(spec.voxel_count(), kFreeVoxel);
        s.belief = VoxelBelief::unknown(spec);
        return s;
    }

    const SceneObject& object(int32_t id) const {
        if (id < 0 || static_cast<size_t>(id) >= objects.size())
            throw UnknownObject("no object with id " + std::to_string(id));
        return objects[static_cast<size_t>(id)];
    }

    bool occupied(size_t linear) const { return truth[linear] != kFreeVoxel; }

    // Voxelizes and inserts a new object. Placement must be collision-free
    // and fully inside the grid; returns false (registry untouched) if not.
    bool try_add_object(SceneObject obj) {
        obj.id = static_cast<int32_t>(objects.size());
        obj.voxels = voxelize_object(obj, spec);
        if (obj.voxels.empty()) return false;
        // Reject clipped shapes: every voxel of the unclipped primitive must
        // be inside the grid, which holds iff the shape's world bounds are.
        const Aabb box = spec.world_box();
        const Vec3 half = world_half_extents(obj);
        const Vec3 c = obj.pose.position;
        if (c.x - half.x < box.lo.x || c.x + half.x > box.hi.x || c.y - half.y < box.lo.y ||
            c.y + half.y > box.hi.y || c.z - half.z < box.lo.z || c.z + half.z > box.hi.z)
            return false;
        for (uint32_t v : obj.voxels)
            if (truth[v] != kFreeVoxel) return false;
        for (uint32_t v : obj.voxels) truth[v] = obj.id;
        obj.present = true;
        objects.push_back(std::move(obj));
        return true;
    }

    // Relocates the object out of the scene (staged). Its truth voxels become
    // free and belief there resets to Unknown: the scene changed, so prior
    // surface observations no longer describe that region.
    void remove_object(int32_t id) {
        if (id < 0 || static_cast<size_t>(id) >= objects.size())
            throw UnknownObject("remove_object: no object with id " + std::to_string(id));
        SceneObject& obj = objects[static_cast<size_t>(id)];
        if (!obj.present) throw AlreadyRemoved("object " + std::to_string(id) + " already staged");
        for (uint32_t v : obj.voxels) {
            truth[v] = kFreeVoxel;
            belief.states[v] = BeliefState::Unknown;
        }
        obj.present = false;
        staging.push_back(id);
    }

    // Reinserts all staged objects at their original poses. Belief is kept:
    // information acquired while they were away stays acquired.
    void restore_scene() {
        for (int32_t id : staging) {
            SceneObject& obj = objects[static_cast<size_t>(id)];
            for (uint32_t v : obj.voxels) truth[v] = obj.id;
            obj.present = true;
        }
        staging.clear();
    }

    // Exhaustive consistency check: truth equals the union of present
    // objects' voxel sets, pairwise disjoint.
    void check_invariants() const {
        std::vector<int32_t> expect(spec.voxel_count(), kFreeVoxel);
        for (const SceneObject& obj : objects) {
            if (!obj.present) continue;
            if (obj.voxels.empty()) throw Error("present object with empty voxel set");
            for (uint32_t v : obj.voxels) {
                if (v >= expect.size()) throw Error("object voxel outside grid");
                if (expect[v] != kFreeVoxel) throw Error("objects overlap in voxel space");
                expect[v] = obj.id;
            }
        }
        if (expect != truth) throw Error("truth grid inconsistent with object registry");
    }
};

}  // namespace ars
