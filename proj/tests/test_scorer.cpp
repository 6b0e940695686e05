#include <catch2/catch_amalgamated.hpp>

#include "ars/dataset.hpp"
#include "ars/scene_gen.hpp"
#include "ars/scorer.hpp"

using namespace ars;

namespace {

uint64_t belief_digest(const VoxelBelief& b) {
    return fnv1a(b.states.data(), b.states.size());
}

CameraConfig test_cam() {
    CameraConfig cam;
    cam.width = 48;
    cam.height = 36;
    return cam;
}

}  // namespace

TEST_CASE("oracle trivials: missed region scores zero, saturated region scores one") {
    Scene scene = generate_scene(GenParams{}, 40);
    const CameraConfig cam = test_cam();
    const GridSpec& spec = scene.spec;
    const RoiBox back_slab{{0, spec.dims.y - 4, 0}, {spec.dims.x - 1, spec.dims.y - 1, spec.dims.z - 1}};

    // Camera looking away from the shelf: frustum cannot reach the region.
    const Viewpoint away{{0.0, spec.origin.y - 0.3, spec.origin.z + 0.1}, -M_PI / 2, 0.0};
    CHECK(oracle_score(scene, back_slab, away, cam) == 0.0);

    // Saturate the region: score is 1 regardless of viewpoint.
    for (int x = back_slab.lo.x; x <= back_slab.hi.x; ++x)
        for (int y = back_slab.lo.y; y <= back_slab.hi.y; ++y)
            for (int z = back_slab.lo.z; z <= back_slab.hi.z; ++z)
                scene.belief.states[spec.linear({x, y, z})] = BeliefState::ObservedFree;
    CHECK(oracle_score(scene, back_slab, away, cam) == 1.0);
}

TEST_CASE("oracle equals clone-observe-coverage on 100 random cases, without mutation") {
    Rng rng(71);
    const CameraConfig cam = test_cam();
    for (int trial = 0; trial < 100; ++trial) {
        Scene scene = generate_scene(GenParams{}, 500 + static_cast<uint64_t>(trial % 10));
        // Randomize the starting belief with a real observation half the time.
        if (trial % 2 == 0) observe(scene, home_viewpoint(scene), cam);
        const GridSpec& spec = scene.spec;
        const int x0 = rng.uniform_int(0, spec.dims.x - 2);
        const int y0 = rng.uniform_int(0, spec.dims.y - 2);
        const int z0 = rng.uniform_int(0, spec.dims.z - 2);
        const RoiBox roi{{x0, y0, z0},
                         {rng.uniform_int(x0 + 1, spec.dims.x - 1),
                          rng.uniform_int(y0 + 1, spec.dims.y - 1),
                          rng.uniform_int(z0 + 1, spec.dims.z - 1)}};
        const Viewpoint v = sample_uniform_viewpoints(scene, 1, 900 + trial)[0];

        const uint64_t before = belief_digest(scene.belief);
        const double fast = oracle_score(scene, roi, v, cam);
        CHECK(belief_digest(scene.belief) == before);  // no mutation

        Scene clone = scene;
        observe(clone, v, cam);
        const double reference = coverage(clone.belief, roi);
        REQUIRE(fast == reference);  // zero tolerance
        CHECK(fast >= coverage(scene.belief, roi));
    }
}

TEST_CASE("pooled features: known channel values") {
    GridSpec spec;
    spec.dims = {32, 32, 16};  // exact 2x2x2 pooling blocks
    spec.resolution = 0.02;
    spec.origin = {0.0, 0.0, 0.0};
    Scene scene = Scene::empty(spec);
    const Viewpoint v{{0.2, -0.1, 0.1}, M_PI / 2, 0.0};

    SECTION("all-unknown belief pools to -1 everywhere") {
        const auto f = extract_features(scene.belief, full_grid_roi(spec), v, spec);
        REQUIRE(f.size() == kFeatureLength);
        for (int i = 0; i < kChannelSize; ++i) REQUIRE(f[i] == -1.0);
    }
    SECTION("whole-grid region pools to 1 everywhere") {
        const auto f = extract_features(scene.belief, full_grid_roi(spec), v, spec);
        for (int i = 0; i < kChannelSize; ++i) REQUIRE(f[kChannelSize + i] == 1.0);
    }
    SECTION("half-observed block pools to the hand-computed mean") {
        // First block covers x,y in [0,2) and z in [0,2): 8 voxels. Mark 4 of
        // them observed-free (code 0), leave 4 unknown (code -1): mean -0.5.
        scene.belief.states[spec.linear({0, 0, 0})] = BeliefState::ObservedFree;
        scene.belief.states[spec.linear({0, 1, 0})] = BeliefState::ObservedFree;
        scene.belief.states[spec.linear({1, 0, 1})] = BeliefState::ObservedFree;
        scene.belief.states[spec.linear({1, 1, 1})] = BeliefState::ObservedFree;
        const auto f = extract_features(scene.belief, full_grid_roi(spec), v, spec);
        CHECK(f[0] == -0.5);
    }
    SECTION("viewpoint block layout") {
        const auto f = extract_features(scene.belief, full_grid_roi(spec), v, spec);
        CHECK(f[2 * kChannelSize + 0] == Catch::Approx((0.2 - 0.0) / 0.64));
        CHECK(f[2 * kChannelSize + 3] == Catch::Approx(std::sin(M_PI / 2)));
        for (int i = 0; i < kViewpointFeatures; ++i) {
            CHECK(f[2 * kChannelSize + i] <= 1.0 + 1e-12);
            CHECK(f[2 * kChannelSize + i] >= -1.0 - 1e-12);
        }
    }
}

TEST_CASE("grids below the pooled resolution are rejected") {
    GridSpec spec;
    spec.dims = {16, 16, 4};
    spec.resolution = 0.02;
    spec.origin = {0.0, 0.0, 0.0};
    const Scene scene = Scene::empty(spec);
    CHECK_THROWS_AS(
        extract_features(scene.belief, full_grid_roi(spec), Viewpoint{}, spec),
        GridTooSmall);
}

TEST_CASE("surrogate forward: zero weights give the logistic midpoint") {
    ScorerModel m = ScorerModel::init({4, 3, 1}, 1);
    for (auto& w : m.weights) w.setZero();
    for (auto& b : m.biases) b.setZero();
    CHECK(m.forward(Eigen::VectorXd::Random(4)) == 0.5);
}

TEST_CASE("surrogate forward matches a pencil-and-paper pass") {
    ScorerModel m;
    m.layer_sizes = {2, 2, 1};
    Eigen::MatrixXd w1(2, 2);
    w1 << 0.1, -0.2, 0.3, 0.4;
    Eigen::MatrixXd w2(1, 2);
    w2 << 0.5, -0.6;
    m.weights = {w1, w2};
    Eigen::VectorXd b1(2);
    b1 << 0.01, -0.02;
    Eigen::VectorXd b2(1);
    b2 << 0.05;
    m.biases = {b1, b2};

    Eigen::VectorXd x(2);
    x << 1.0, 2.0;
    // Hidden: relu([0.1*1 - 0.2*2 + 0.01, 0.3*1 + 0.4*2 - 0.02]) = [0, 1.08]
    // Output: logistic(0.5*0 - 0.6*1.08 + 0.05)
    const double expected = 1.0 / (1.0 + std::exp(-(0.5 * 0.0 - 0.6 * 1.08 + 0.05)));
    CHECK(std::abs(surrogate_forward(m, x) - expected) < 1e-12);

    SECTION("shape mismatch is rejected") {
        CHECK_THROWS_AS(surrogate_forward(m, Eigen::VectorXd::Zero(3)), ShapeMismatch);
    }
}

TEST_CASE("batched forward equals per-sample forward") {
    const ScorerModel m = ScorerModel::init({8, 6, 4, 1}, 9);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 17);
    const Eigen::VectorXd batch = m.forward_batch(X);
    for (int i = 0; i < 17; ++i) REQUIRE(batch(i) == m.forward(X.col(i)));
    for (int i = 0; i < 17; ++i) {
        CHECK(batch(i) > 0.0);
        CHECK(batch(i) < 1.0);
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    const int n = 10;
    ScorerModel m = ScorerModel::init({6, 5, 1}, 3);
    Rng rng(12);
    Eigen::MatrixXd X(6, n);
    Eigen::VectorXd y(n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < 6; ++r) X(r, c) = rng.uniform(-1.0, 1.0);
        y(c) = rng.uniform(0.05, 0.95);
    }

    detail::LayerGrads grads;
    for (size_t l = 0; l < m.weights.size(); ++l) {
        grads.dW.push_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
        grads.db.push_back(Eigen::VectorXd::Zero(m.biases[l].size()));
    }
    detail::backprop_batch(m, X, y, &grads);

    const double eps = 1e-5;
    auto loss = [&] { return (m.forward_batch(X) - y).squaredNorm() / n; };
    double max_rel = 0.0;
    auto check_param = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + eps;
        const double up = loss();
        param = saved - eps;
        const double down = loss();
        param = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double rel = std::abs(analytic - numeric) /
                           std::max(1e-8, std::abs(analytic) + std::abs(numeric));
        max_rel = std::max(max_rel, rel);
    };
    for (size_t l = 0; l < m.weights.size(); ++l) {
        for (Eigen::Index i = 0; i < m.weights[l].size(); ++i)
            check_param(m.weights[l].data()[i], grads.dW[l].data()[i]);
        for (Eigen::Index i = 0; i < m.biases[l].size(); ++i)
            check_param(m.biases[l].data()[i], grads.db[l].data()[i]);
    }
    CHECK(max_rel < 1e-4);
}

TEST_CASE("training fits a constant target") {
    const int n = 64;
    Eigen::MatrixXd X = Eigen::MatrixXd::Constant(8, n, 0.3);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 0.7);
    TrainHyper hyper;
    hyper.max_epochs = 400;
    hyper.learning_rate = 0.05;
    hyper.seed = 5;
    TrainReport report;
    const ScorerModel m =
        train_surrogate(X, y, X, y, X, y, {8, 8, 1}, hyper, &report);
    const Eigen::VectorXd pred = m.forward_batch(X);
    for (int i = 0; i < n; ++i) REQUIRE(std::abs(pred(i) - 0.7) < 0.01);
}

TEST_CASE("a non-finite training loss raises Divergence") {
    // The logistic output bounds the loss for real data, so the non-finite
    // guard is exercised with a poisoned target.
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(4, 16);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(16, 0.5);
    y(3) = std::numeric_limits<double>::quiet_NaN();
    TrainHyper hyper;
    hyper.max_epochs = 5;
    CHECK_THROWS_AS(train_surrogate(X, y, X, y, X, y, {4, 4, 1}, hyper, nullptr), Divergence);
}

TEST_CASE("dataset generation: splits, bounds, determinism") {
    GenParams params;
    CameraConfig cam = test_cam();
    const Dataset ds = generate_dataset(1000, params, 11, cam);
    CHECK(ds.samples.size() == 1000);
    CHECK(ds.count(Split::Train) == 800);
    CHECK(ds.count(Split::Val) == 100);
    CHECK(ds.count(Split::Test) == 100);
    for (const TrainSample& s : ds.samples) {
        REQUIRE(s.target >= 0.0);
        REQUIRE(s.target <= 1.0);
        REQUIRE(s.target >= coverage(s.belief, s.roi));  // cumulative target
    }

    const Dataset again = generate_dataset(200, params, 33, cam);
    const Dataset again2 = generate_dataset(200, params, 33, cam);
    CHECK(dataset_digest(again) == dataset_digest(again2));
    CHECK(dataset_digest(again) != dataset_digest(ds));
}

TEST_CASE("dataset file round trip preserves the digest") {
    const Dataset ds = generate_dataset(50, GenParams{}, 3, test_cam());
    const std::string path = "/tmp/ars_test_dataset.bin";
    save_dataset(ds, path);
    const Dataset loaded = load_dataset(path);
    CHECK(dataset_digest(loaded) == dataset_digest(ds));
    CHECK(loaded.samples.size() == 50);

    SECTION("corrupted file is rejected") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        f.put('\x7f');
        f.close();
        CHECK_THROWS_AS(load_dataset(path), MalformedDocument);
    }
}

TEST_CASE("training loss trends down over the first epochs on a seeded dataset") {
    const Dataset ds = generate_dataset(300, GenParams{}, 8, test_cam());
    Eigen::MatrixXd Xtr, Xva, Xte;
    Eigen::VectorXd ytr, yva, yte;
    dataset_features(ds, Split::Train, &Xtr, &ytr);
    dataset_features(ds, Split::Val, &Xva, &yva);
    dataset_features(ds, Split::Test, &Xte, &yte);
    TrainHyper hyper;
    hyper.max_epochs = 5;
    hyper.seed = 2;
    TrainReport report;
    train_surrogate(Xtr, ytr, Xva, yva, Xte, yte, {kFeatureLength, 64, 16, 1}, hyper, &report);
    REQUIRE(report.train_curve.size() == 5);
    for (size_t e = 1; e < report.train_curve.size(); ++e)
        CHECK(report.train_curve[e] < report.train_curve[0]);
}

TEST_CASE("learned scorer matches the plain forward pass") {
    Scene scene = generate_scene(GenParams{}, 13);
    observe(scene, home_viewpoint(scene), test_cam());
    const RoiBox roi{{0, 0, 0}, {scene.spec.dims.x / 2, scene.spec.dims.y - 1, scene.spec.dims.z - 1}};
    const ScorerModel m = ScorerModel::init({kFeatureLength, 32, 8, 1}, 21);
    const LearnedScorer scorer(scene, roi, m);
    const Viewpoint v = sample_uniform_viewpoints(scene, 1, 5)[0];
    const double direct = surrogate_forward(m, extract_features(scene.belief, roi, v, scene.spec));
    CHECK(scorer.score(v) == Catch::Approx(direct).epsilon(1e-12));
}
