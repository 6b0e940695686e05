#pragma once

#include <cstring>
#include <fstream>
#include <numeric>
#include <vector>

#include "ars/hash.hpp"
#include "ars/language.hpp"
#include "ars/pipeline.hpp"
#include "ars/planner.hpp"
#include "ars/scene_gen.hpp"

namespace ars {

enum class Split : uint8_t { Train = 0, Val = 1, Test = 2 };

// One supervised pair: the belief before moving, the requested region, the
// candidate viewpoint, and the ROI coverage realized after observing from it.
struct TrainSample {
    GridSpec spec;
    VoxelBelief belief;
    RoiBox roi;
    Viewpoint viewpoint;
    double target = 0.0;
};

struct Dataset {
    std::vector<TrainSample> samples;
    std::vector<Split> split;

    size_t count(Split s) const {
        size_t n = 0;
        for (Split x : split) n += (x == s) ? 1 : 0;
        return n;
    }
};

namespace detail {

// Deterministic hash split with exact 0.8/0.1/0.1 counts: samples ranked by
// per-index hash, first 80% train, next 10% val, rest test.
inline std::vector<Split> hash_split(size_t n) {
    std::vector<uint64_t> h(n);
    for (size_t i = 0; i < n; ++i) h[i] = mix_seed(0x53704c49ull, i);
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return h[a] != h[b] ? h[a] < h[b] : a < b;
    });
    const size_t n_train = static_cast<size_t>(std::llround(0.8 * static_cast<double>(n)));
    const size_t n_val = static_cast<size_t>(std::llround(0.1 * static_cast<double>(n)));
    std::vector<Split> split(n, Split::Test);
    for (size_t r = 0; r < n; ++r) {
        if (r < n_train) split[idx[r]] = Split::Train;
        else if (r < n_train + n_val) split[idx[r]] = Split::Val;
    }
    return split;
}

// Random region request over a generated scene: random present anchor and
// direction, retried until the resulting region is nonempty.
inline RoiBox random_roi(const Scene& scene, Rng& rng, int* anchor_out) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const int anchor = rng.uniform_int(0, static_cast<int>(scene.objects.size()) - 1);
        const auto dir = static_cast<Direction>(rng.uniform_int(0, 3));
        try {
            const RoiBox roi = build_roi(scene, anchor, dir);
            if (anchor_out) *anchor_out = anchor;
            return roi;
        } catch (const EmptyRoi&) {
        }
    }
    throw Error("random_roi: no nonempty region found");
}

}  // namespace detail

// Rollout-based data collection: per rollout a fresh random scene and region,
// the home observation, then up to five random viewpoints, each emitting one
// sample whose target is the cumulative ROI coverage after the observation.
inline Dataset generate_dataset(size_t n, const GenParams& params, uint64_t seed,
                                const CameraConfig& cam = {87.0, 58.0, 64, 48, 0.8}) {
    if (n < 1) throw Error("generate_dataset: need at least one sample");
    Dataset ds;
    ds.samples.reserve(n);
    uint64_t rollout = 0;
    Rng rng(mix_seed(seed, 0x64617461ull));
    while (ds.samples.size() < n) {
        Scene scene = generate_scene(params, mix_seed(seed, 0x7363656eull + rollout));
        ++rollout;
        int anchor = -1;
        const RoiBox roi = detail::random_roi(scene, rng, &anchor);
        observe(scene, home_viewpoint(scene), cam);
        const ViewpointSpace space(scene, ViewpointBounds{});
        for (int step = 0; step < 5 && ds.samples.size() < n; ++step) {
            const Viewpoint v = space.sample_uniform(rng);
            TrainSample sample{scene.spec, scene.belief, roi, v, 0.0};
            observe(scene, v, cam);
            sample.target = coverage(scene.belief, roi);
            ds.samples.push_back(std::move(sample));
        }
    }
    ds.split = detail::hash_split(n);
    return ds;
}

// ---------------------------------------------------------------------------
// Dataset file: "ARSDATA1" magic, u64 count, then per sample dims/origin/
// resolution, RLE belief, roi, viewpoint, target, split; u64 FNV digest
// footer over everything between magic and footer.

namespace detail {

template <typename T>
void put(std::string& buf, const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw MalformedDocument("dataset file: truncated");
    return v;
}

}  // namespace detail

inline uint64_t dataset_digest(const Dataset& ds);

inline std::string serialize_dataset(const Dataset& ds) {
    std::string buf;
    detail::put<uint64_t>(buf, ds.samples.size());
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        const TrainSample& s = ds.samples[i];
        detail::put<int32_t>(buf, s.spec.dims.x);
        detail::put<int32_t>(buf, s.spec.dims.y);
        detail::put<int32_t>(buf, s.spec.dims.z);
        detail::put<double>(buf, s.spec.resolution);
        detail::put<double>(buf, s.spec.origin.x);
        detail::put<double>(buf, s.spec.origin.y);
        detail::put<double>(buf, s.spec.origin.z);
        // RLE belief
        size_t run_count_pos = buf.size();
        detail::put<uint32_t>(buf, 0);
        uint32_t runs = 0;
        size_t j = 0;
        const auto& st = s.belief.states;
        while (j < st.size()) {
            size_t k = j;
            while (k < st.size() && st[k] == st[j]) ++k;
            detail::put<uint32_t>(buf, static_cast<uint32_t>(k - j));
            detail::put<uint8_t>(buf, static_cast<uint8_t>(st[j]));
            ++runs;
            j = k;
        }
        std::memcpy(buf.data() + run_count_pos, &runs, sizeof(runs));
        detail::put<int32_t>(buf, s.roi.lo.x);
        detail::put<int32_t>(buf, s.roi.lo.y);
        detail::put<int32_t>(buf, s.roi.lo.z);
        detail::put<int32_t>(buf, s.roi.hi.x);
        detail::put<int32_t>(buf, s.roi.hi.y);
        detail::put<int32_t>(buf, s.roi.hi.z);
        detail::put<double>(buf, s.viewpoint.position.x);
        detail::put<double>(buf, s.viewpoint.position.y);
        detail::put<double>(buf, s.viewpoint.position.z);
        detail::put<double>(buf, s.viewpoint.yaw);
        detail::put<double>(buf, s.viewpoint.pitch);
        detail::put<double>(buf, s.target);
        detail::put<uint8_t>(buf, static_cast<uint8_t>(ds.split[i]));
    }
    return buf;
}

inline uint64_t dataset_digest(const Dataset& ds) {
    const std::string payload = serialize_dataset(ds);
    return fnv1a(payload.data(), payload.size());
}

inline void save_dataset(const Dataset& ds, const std::string& path) {
    const std::string payload = serialize_dataset(ds);
    const uint64_t digest = fnv1a(payload.data(), payload.size());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out.write("ARSDATA1", 8);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.write(reinterpret_cast<const char*>(&digest), 8);
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "ARSDATA1")
        throw MalformedDocument("dataset file: bad magic");
    const auto n = detail::take<uint64_t>(in);
    Dataset ds;
    ds.samples.reserve(n);
    ds.split.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        TrainSample s;
        s.spec.dims.x = detail::take<int32_t>(in);
        s.spec.dims.y = detail::take<int32_t>(in);
        s.spec.dims.z = detail::take<int32_t>(in);
        s.spec.resolution = detail::take<double>(in);
        s.spec.origin.x = detail::take<double>(in);
        s.spec.origin.y = detail::take<double>(in);
        s.spec.origin.z = detail::take<double>(in);
        s.spec.validate();
        const auto runs = detail::take<uint32_t>(in);
        s.belief.dims = s.spec.dims;
        s.belief.states.reserve(s.spec.voxel_count());
        for (uint32_t r = 0; r < runs; ++r) {
            const auto len = detail::take<uint32_t>(in);
            const auto state = detail::take<uint8_t>(in);
            if (state > 2 || s.belief.states.size() + len > s.spec.voxel_count())
                throw MalformedDocument("dataset file: bad belief run");
            s.belief.states.insert(s.belief.states.end(), len, static_cast<BeliefState>(state));
        }
        if (s.belief.states.size() != s.spec.voxel_count())
            throw MalformedDocument("dataset file: belief does not cover grid");
        s.roi.lo.x = detail::take<int32_t>(in);
        s.roi.lo.y = detail::take<int32_t>(in);
        s.roi.lo.z = detail::take<int32_t>(in);
        s.roi.hi.x = detail::take<int32_t>(in);
        s.roi.hi.y = detail::take<int32_t>(in);
        s.roi.hi.z = detail::take<int32_t>(in);
        s.roi.validate(s.spec);
        s.viewpoint.position.x = detail::take<double>(in);
        s.viewpoint.position.y = detail::take<double>(in);
        s.viewpoint.position.z = detail::take<double>(in);
        s.viewpoint.yaw = detail::take<double>(in);
        s.viewpoint.pitch = detail::take<double>(in);
        s.target = detail::take<double>(in);
        const auto split = detail::take<uint8_t>(in);
        if (split > 2) throw MalformedDocument("dataset file: bad split tag");
        ds.samples.push_back(std::move(s));
        ds.split.push_back(static_cast<Split>(split));
    }
    const auto digest = detail::take<uint64_t>(in);
    if (digest != dataset_digest(ds)) throw MalformedDocument("dataset file: digest mismatch");
    return ds;
}

// Feature matrices per split, columns are samples.
inline void dataset_features(const Dataset& ds, Split which, Eigen::MatrixXd* X,
                             Eigen::VectorXd* y) {
    const size_t n = ds.count(which);
    X->resize(kFeatureLength, static_cast<Eigen::Index>(n));
    y->resize(static_cast<Eigen::Index>(n));
    Eigen::Index col = 0;
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        if (ds.split[i] != which) continue;
        const TrainSample& s = ds.samples[i];
        X->col(col) = extract_features(s.belief, s.roi, s.viewpoint, s.spec);
        (*y)(col) = s.target;
        ++col;
    }
}

}  // namespace ars
