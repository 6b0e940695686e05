#pragma once

#include <Eigen/Core>

#include "ars/camera.hpp"
#include "ars/scene.hpp"

namespace ars {

// Pooled-grid features for the learned coverage regressor: two channels
// (belief, ROI mask) mean-pooled to 16x16x8, then the normalized viewpoint.
// Layout: [belief 2048][roi 2048][px, py, pz, sin yaw, cos yaw, sin pitch,
// cos pitch]. Belief encodes Unknown=-1, ObservedFree=0, ObservedOccupied=+1.
constexpr int kPoolX = 16, kPoolY = 16, kPoolZ = 8;
constexpr int kChannelSize = kPoolX * kPoolY * kPoolZ;  // 2048
constexpr int kViewpointFeatures = 7;
constexpr int kFeatureLength = 2 * kChannelSize + kViewpointFeatures;  // 4103

namespace detail {

inline double belief_code(BeliefState s) {
    switch (s) {
        case BeliefState::Unknown: return -1.0;
        case BeliefState::ObservedFree: return 0.0;
        case BeliefState::ObservedOccupied: return 1.0;
    }
    return 0.0;
}

// Bin b of P over n cells covers [b*n/P, (b+1)*n/P) — the bins partition the
// axis exactly.
inline int bin_start(int b, int n, int pool) { return static_cast<int>(static_cast<long>(b) * n / pool); }

}  // namespace detail

// Mean-pools belief and ROI-mask channels over the grid. Throws GridTooSmall
// when any axis has fewer cells than its pooled resolution.
inline void pool_channels(const VoxelBelief& belief, const RoiBox& roi, const GridSpec& spec,
                          Eigen::Ref<Eigen::VectorXd> out) {
    const Index3 dims = spec.dims;
    if (dims.x < kPoolX || dims.y < kPoolY || dims.z < kPoolZ)
        throw GridTooSmall("pool_channels: grid smaller than pooled resolution");
    int idx = 0;
    for (int bx = 0; bx < kPoolX; ++bx) {
        const int x0 = detail::bin_start(bx, dims.x, kPoolX), x1 = detail::bin_start(bx + 1, dims.x, kPoolX);
        for (int by = 0; by < kPoolY; ++by) {
            const int y0 = detail::bin_start(by, dims.y, kPoolY), y1 = detail::bin_start(by + 1, dims.y, kPoolY);
            for (int bz = 0; bz < kPoolZ; ++bz) {
                const int z0 = detail::bin_start(bz, dims.z, kPoolZ), z1 = detail::bin_start(bz + 1, dims.z, kPoolZ);
                double bel = 0.0, mask = 0.0;
                int count = 0;
                for (int x = x0; x < x1; ++x)
                    for (int y = y0; y < y1; ++y) {
                        const size_t base = (static_cast<size_t>(x) * dims.y + y) * dims.z;
                        for (int z = z0; z < z1; ++z) {
                            bel += detail::belief_code(belief.states[base + z]);
                            mask += roi.contains({x, y, z}) ? 1.0 : 0.0;
                            ++count;
                        }
                    }
                out[idx] = bel / count;
                out[kChannelSize + idx] = mask / count;
                ++idx;
            }
        }
    }
}

inline void viewpoint_features(const Viewpoint& v, const GridSpec& spec,
                               Eigen::Ref<Eigen::VectorXd> out) {
    const Vec3 ext = spec.extent();
    out[0] = (v.position.x - spec.origin.x) / ext.x;
    out[1] = (v.position.y - spec.origin.y) / ext.y;
    out[2] = (v.position.z - spec.origin.z) / ext.z;
    out[3] = std::sin(v.yaw);
    out[4] = std::cos(v.yaw);
    out[5] = std::sin(v.pitch);
    out[6] = std::cos(v.pitch);
}

inline Eigen::VectorXd extract_features(const VoxelBelief& belief, const RoiBox& roi,
                                        const Viewpoint& v, const GridSpec& spec) {
    Eigen::VectorXd f(kFeatureLength);
    pool_channels(belief, roi, spec, f.head(2 * kChannelSize));
    viewpoint_features(v, spec, f.tail(kViewpointFeatures));
    return f;
}

}  // namespace ars
