#pragma once

#include <cstdint>
#include <cstdlib>

#include "ars/errors.hpp"
#include "ars/geometry.hpp"

namespace ars {

struct Index3 {
    int x = 0, y = 0, z = 0;

    bool operator==(const Index3& o) const { return x == o.x && y == o.y && z == o.z; }
    int operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }
    int& axis(int a) { return a == 0 ? x : (a == 1 ? y : z); }
};

// Voxelization of the scene volume. Axes: X = width (viewer's right from the
// camera home pose), Y = depth (into the shelf), Z = up.
struct GridSpec {
    Index3 dims;              // voxel counts (nx, ny, nz)
    double resolution = 0.02; // meters per voxel edge
    Vec3 origin;              // world position of the (0,0,0) voxel corner

    int nx() const { return dims.x; }
    int ny() const { return dims.y; }
    int nz() const { return dims.z; }
    size_t voxel_count() const {
        return static_cast<size_t>(dims.x) * dims.y * dims.z;
    }

    bool contains(const Index3& v) const {
        return v.x >= 0 && v.x < dims.x && v.y >= 0 && v.y < dims.y && v.z >= 0 && v.z < dims.z;
    }

    size_t linear(const Index3& v) const {
        return (static_cast<size_t>(v.x) * dims.y + v.y) * dims.z + v.z;
    }

    Index3 unlinear(size_t i) const {
        const int z = static_cast<int>(i % dims.z);
        const size_t xy = i / dims.z;
        return {static_cast<int>(xy / dims.y), static_cast<int>(xy % dims.y), z};
    }

    Vec3 voxel_center(const Index3& v) const {
        return {origin.x + (v.x + 0.5) * resolution, origin.y + (v.y + 0.5) * resolution,
                origin.z + (v.z + 0.5) * resolution};
    }

    // Voxel containing a world point; may be out of bounds (caller checks).
    Index3 voxel_of(const Vec3& p) const {
        return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution)),
                static_cast<int>(std::floor((p.z - origin.z) / resolution))};
    }

    Vec3 extent() const {
        return {dims.x * resolution, dims.y * resolution, dims.z * resolution};
    }

    Aabb world_box() const { return {origin, origin + extent()}; }

    void validate() const {
        if (dims.x < 1 || dims.y < 1 || dims.z < 1)
            throw Error("GridSpec: voxel counts must be >= 1");
        if (resolution <= 0.0) throw Error("GridSpec: resolution must be > 0");
    }
};

// Region of interest: inclusive voxel index ranges along each axis.
struct RoiBox {
    Index3 lo, hi;  // inclusive

    size_t volume_voxels() const {
        return static_cast<size_t>(hi.x - lo.x + 1) * (hi.y - lo.y + 1) * (hi.z - lo.z + 1);
    }

    bool contains(const Index3& v) const {
        return v.x >= lo.x && v.x <= hi.x && v.y >= lo.y && v.y <= hi.y && v.z >= lo.z &&
               v.z <= hi.z;
    }

    double volume_m3(const GridSpec& spec) const {
        const double r = spec.resolution;
        return static_cast<double>(volume_voxels()) * r * r * r;
    }

    Aabb world_box(const GridSpec& spec) const {
        const double r = spec.resolution;
        return {{spec.origin.x + lo.x * r, spec.origin.y + lo.y * r, spec.origin.z + lo.z * r},
                {spec.origin.x + (hi.x + 1) * r, spec.origin.y + (hi.y + 1) * r,
                 spec.origin.z + (hi.z + 1) * r}};
    }

    void validate(const GridSpec& spec) const {
        if (lo.x > hi.x || lo.y > hi.y || lo.z > hi.z) throw EmptyRoi("RoiBox: empty index range");
        if (!spec.contains(lo) || !spec.contains(hi))
            throw EmptyRoi("RoiBox: range outside grid bounds");
    }
};

// Whole-grid region, the "scene" variant of the ROI scorers.
inline RoiBox full_grid_roi(const GridSpec& spec) {
    return {{0, 0, 0}, {spec.dims.x - 1, spec.dims.y - 1, spec.dims.z - 1}};
}

}  // namespace ars
