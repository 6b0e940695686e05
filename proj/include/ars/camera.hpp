#pragma once

#include <cmath>

#include "ars/errors.hpp"
#include "ars/geometry.hpp"

namespace ars {

// 5-DOF camera pose: position plus yaw/pitch, roll fixed at zero (up-vector
// gravity aligned). Intrinsics come from CameraConfig.
struct Viewpoint {
    Vec3 position;
    double yaw = 0.0;    // radians about Z, 0 = +X, pi/2 = +Y (into the shelf)
    double pitch = 0.0;  // radians, elevation of the optical axis

    Vec3 forward() const {
        const double cp = std::cos(pitch);
        return {cp * std::cos(yaw), cp * std::sin(yaw), std::sin(pitch)};
    }
};

// Pinhole depth camera over the voxel grid.
struct CameraConfig {
    double hfov_deg = 87.0;
    double vfov_deg = 58.0;
    int width = 160;   // rays per row
    int height = 120;  // rays per column
    double max_range = 2.0;

    void validate() const;

    // Basis for pixel ray construction: forward, right, up.
    struct Basis {
        Vec3 f, r, u;
        double tan_half_h, tan_half_v;
    };

    Basis basis(const Viewpoint& v) const {
        Basis b;
        b.f = v.forward();
        const Vec3 world_up{0.0, 0.0, 1.0};
        b.r = normalized(cross(b.f, world_up));
        b.u = cross(b.r, b.f);
        b.tan_half_h = std::tan(0.5 * hfov_deg * M_PI / 180.0);
        b.tan_half_v = std::tan(0.5 * vfov_deg * M_PI / 180.0);
        return b;
    }

    // Unit direction through the center of pixel (col, row); row 0 is the top.
    static Vec3 pixel_dir(const Basis& b, int col, int row, int width, int height) {
        const double sx = (2.0 * (col + 0.5) / width - 1.0) * b.tan_half_h;
        const double sy = (2.0 * (row + 0.5) / height - 1.0) * b.tan_half_v;
        return normalized(b.f + b.r * sx - b.u * sy);
    }
};

inline void CameraConfig::validate() const {
    if (hfov_deg <= 0.0 || hfov_deg >= 180.0 || vfov_deg <= 0.0 || vfov_deg >= 180.0)
        throw Error("CameraConfig: FOV must lie in (0, 180) degrees");
    if (width < 2 || height < 2) throw Error("CameraConfig: ray grid must be at least 2x2");
    if (max_range <= 0.0) throw Error("CameraConfig: max range must be > 0");
}

}  // namespace ars
