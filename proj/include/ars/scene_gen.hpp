#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ars/rng.hpp"
#include "ars/scene.hpp"

namespace ars {

template <typename T>
struct Range {
    T lo, hi;
    void validate(const char* name) const {
        if (lo > hi) throw Error(std::string("GenParams: empty range for ") + name);
    }
};

// Randomized confined-shelf scene parameters. Defaults follow the desk-scale
// cabinet setup: 70-140 cm wide, 25-40 cm tall, 50-100 cm deep, 10-20 items,
// large items biased toward the front face.
struct GenParams {
    Range<double> width_m{0.70, 1.40};
    Range<double> height_m{0.25, 0.40};
    Range<double> depth_m{0.50, 1.00};
    Range<double> standoff_m{0.30, 0.70};    // shelf front distance from camera home
    Range<double> elevation_m{0.30, 0.60};   // shelf floor height above ground
    Range<int> object_count{10, 20};
    Range<double> large_size_m{0.14, 0.34};  // per-dimension extent, clamped to the shelf
    Range<double> small_size_m{0.04, 0.09};
    double large_fraction = 0.6;
    double resolution = 0.02;
    int place_retry_budget = 1000;
    std::vector<std::string> colors{"red",  "green",  "blue",   "yellow", "pink",
                                    "purple", "orange", "white", "black",  "brown"};
    std::vector<std::string> shapes{"box", "cylinder"};

    void validate() const {
        width_m.validate("width");
        height_m.validate("height");
        depth_m.validate("depth");
        standoff_m.validate("standoff");
        elevation_m.validate("elevation");
        object_count.validate("object count");
        large_size_m.validate("large size");
        small_size_m.validate("small size");
        if (object_count.lo < 1) throw Error("GenParams: object count must be >= 1");
        if (resolution <= 0.0) throw Error("GenParams: resolution must be > 0");
        if (colors.empty() || shapes.empty()) throw Error("GenParams: empty vocabulary");
    }
};

namespace detail {

inline SceneObject draw_object(const GenParams& params, Rng& rng, const GridSpec& spec) {
    SceneObject obj;
    obj.category = rng.bernoulli(params.large_fraction) ? SizeCategory::Large : SizeCategory::Small;
    const Range<double>& sz =
        obj.category == SizeCategory::Large ? params.large_size_m : params.small_size_m;
    obj.shape_label = params.shapes[rng.uniform_int(0, static_cast<int>(params.shapes.size()) - 1)];
    obj.shape = obj.shape_label == "cylinder" ? ShapeKind::Cylinder : ShapeKind::Box;
    obj.color_label = params.colors[rng.uniform_int(0, static_cast<int>(params.colors.size()) - 1)];
    if (obj.shape == ShapeKind::Cylinder) {
        const double d = rng.uniform(sz.lo, sz.hi);
        obj.size = {d, d, rng.uniform(sz.lo, sz.hi)};
    } else {
        obj.size = {rng.uniform(sz.lo, sz.hi), rng.uniform(sz.lo, sz.hi),
                    rng.uniform(sz.lo, sz.hi)};
    }
    // Large items go nearly shelf-height so they genuinely block the view;
    // footprints stay placeable in the narrowest shelves.
    const Vec3 ext0 = spec.extent();
    obj.size.x = std::min(obj.size.x, 0.40 * ext0.x);
    obj.size.y = std::min(obj.size.y, 0.40 * ext0.y);
    if (obj.category == SizeCategory::Large)
        obj.size.z = std::max(obj.size.z, 0.75 * ext0.z);
    obj.size.z = std::min(obj.size.z, ext0.z - 2.0 * spec.resolution);
    obj.pose.yaw = rng.uniform(0.0, 2.0 * M_PI);

    const Vec3 ext = spec.extent();
    const Vec3 half = world_half_extents(obj);
    const double mx = std::min(half.x + spec.resolution, 0.45 * ext.x);
    const double my = std::min(half.y + spec.resolution, 0.45 * ext.y);
    obj.pose.position.x = spec.origin.x + rng.uniform(mx, ext.x - mx);
    // Large objects go toward the front face (small y); the quadratic pull
    // keeps the draw inside the front 60% of the depth.
    double yf = rng.uniform();
    if (obj.category == SizeCategory::Large) yf = 0.6 * yf * yf;
    obj.pose.position.y = spec.origin.y + my + yf * (ext.y - 2.0 * my);
    obj.pose.position.z = spec.origin.z + 0.5 * obj.size.z + 0.5 * spec.resolution;  // on the floor
    return obj;
}

}  // namespace detail

// Deterministic random shelf scene: dims within ranges, objects placed
// collision-free, belief all Unknown.
inline Scene generate_scene(const GenParams& params, uint64_t seed) {
    params.validate();
    Rng rng(seed);

    const double width = rng.uniform(params.width_m.lo, params.width_m.hi);
    const double height = rng.uniform(params.height_m.lo, params.height_m.hi);
    const double depth = rng.uniform(params.depth_m.lo, params.depth_m.hi);
    const double standoff = rng.uniform(params.standoff_m.lo, params.standoff_m.hi);
    const double elevation = rng.uniform(params.elevation_m.lo, params.elevation_m.hi);

    GridSpec spec;
    spec.resolution = params.resolution;
    spec.dims = {std::max(1, static_cast<int>(std::lround(width / params.resolution))),
                 std::max(1, static_cast<int>(std::lround(depth / params.resolution))),
                 std::max(1, static_cast<int>(std::lround(height / params.resolution)))};
    // World frame: camera home sits at x = 0 in front of the shelf opening.
    spec.origin = {-0.5 * spec.dims.x * params.resolution, standoff, elevation};

    Scene scene = Scene::empty(spec);
    const int count = rng.uniform_int(params.object_count.lo, params.object_count.hi);
    for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < params.place_retry_budget && !placed; ++attempt)
            placed = scene.try_add_object(detail::draw_object(params, rng, spec));
        if (!placed)
            throw PlacementFailure("generate_scene: no collision-free placement for object " +
                                   std::to_string(i) + " within " +
                                   std::to_string(params.place_retry_budget) + " attempts");
    }
    return scene;
}

}  // namespace ars
