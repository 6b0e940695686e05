#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "ars/language.hpp"
#include "ars/scene_gen.hpp"
#include "ars/sensing.hpp"

using namespace ars;

namespace {

Direction direction_from_token(const std::string& s) {
    if (s == "left") return Direction::Left;
    if (s == "right") return Direction::Right;
    if (s == "behind") return Direction::Behind;
    if (s == "front") return Direction::Front;
    throw std::runtime_error("bad corpus direction: " + s);
}

struct CorpusEntry {
    std::string prompt;
    Direction direction;
    std::vector<std::string> anchor;
};

std::vector<CorpusEntry> load_corpus() {
    std::ifstream in(ARS_SOURCE_DIR "/data/prompts.tsv");
    REQUIRE(in.good());
    std::vector<CorpusEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t t1 = line.find('\t');
        const size_t t2 = line.find('\t', t1 + 1);
        REQUIRE(t1 != std::string::npos);
        REQUIRE(t2 != std::string::npos);
        CorpusEntry e;
        e.prompt = line.substr(0, t1);
        e.direction = direction_from_token(line.substr(t1 + 1, t2 - t1 - 1));
        std::istringstream rest(line.substr(t2 + 1));
        std::string tok;
        while (rest >> tok) e.anchor.push_back(tok);
        entries.push_back(std::move(e));
    }
    return entries;
}

// A small two-object scene with everything marked observed.
Scene labeled_scene() {
    GridSpec spec;
    spec.dims = {30, 20, 10};
    spec.resolution = 0.02;
    spec.origin = {0.0, 0.0, 0.0};
    Scene scene = Scene::empty(spec);

    SceneObject cyl;
    cyl.shape = ShapeKind::Cylinder;
    cyl.size = {0.08, 0.08, 0.10};
    cyl.pose.position = {0.22, 0.20, 0.06};
    cyl.color_label = "pink";
    cyl.shape_label = "cylinder";
    REQUIRE(scene.try_add_object(cyl));

    SceneObject box;
    box.shape = ShapeKind::Box;
    box.size = {0.08, 0.08, 0.08};
    box.pose.position = {0.44, 0.22, 0.05};
    box.color_label = "blue";
    box.shape_label = "box";
    REQUIRE(scene.try_add_object(box));

    for (const SceneObject& obj : scene.objects)
        for (uint32_t v : obj.voxels) scene.belief.states[v] = BeliefState::ObservedOccupied;
    return scene;
}

}  // namespace

TEST_CASE("the paper prompts parse exactly") {
    const PromptParse a = parse_prompt("Show me to the left of the pink cylinder");
    CHECK(a.direction == Direction::Left);
    CHECK(a.anchor_tokens == std::vector<std::string>{"pink", "cylinder"});

    const PromptParse b = parse_prompt("Show me behind the purple cylinder");
    CHECK(b.direction == Direction::Behind);
    CHECK(b.anchor_tokens == std::vector<std::string>{"purple", "cylinder"});

    const PromptParse c = parse_prompt("Show me to the left of the Pringles can.");
    CHECK(c.direction == Direction::Left);
    CHECK(c.anchor_tokens == std::vector<std::string>{"pringles", "can"});
}

TEST_CASE("the full fixture corpus parses exactly") {
    const auto corpus = load_corpus();
    REQUIRE(corpus.size() >= 20);
    for (const CorpusEntry& e : corpus) {
        INFO("prompt: " << e.prompt);
        const PromptParse p = parse_prompt(e.prompt);
        CHECK(p.direction == e.direction);
        CHECK(p.anchor_tokens == e.anchor);
    }
}

TEST_CASE("stable rephrasings produce identical parses") {
    const auto a = parse_prompt("show me to the left of the pink cylinder");
    const auto b = parse_prompt("show the area to the left of the pink cylinder");
    CHECK(a.direction == b.direction);
    CHECK(a.anchor_tokens == b.anchor_tokens);
}

TEST_CASE("unsupported directions and missing anchors are rejected") {
    CHECK_THROWS_AS(parse_prompt("Show me above the box"), NoDirectionFound);
    CHECK_THROWS_AS(parse_prompt(""), NoDirectionFound);
    CHECK_THROWS_AS(parse_prompt("Show me the left side"), NoAnchorFound);
    CHECK_THROWS_AS(parse_prompt("Show me to the left of the"), NoAnchorFound);
}

TEST_CASE("anchors ground to the best-overlap visible object") {
    const Scene scene = labeled_scene();

    SECTION("unique full match") {
        PromptParse p{{"pink", "cylinder"}, Direction::Left};
        CHECK(resolve_anchor(p, scene) == 0);
        p.anchor_tokens = {"blue", "box"};
        CHECK(resolve_anchor(p, scene) == 1);
    }
    SECTION("no label overlap") {
        const PromptParse p{{"pringles", "can"}, Direction::Left};
        CHECK_THROWS_AS(resolve_anchor(p, scene), AnchorNotVisible);
    }
    SECTION("unobserved objects are not candidates") {
        Scene blind = scene;
        for (BeliefState& s : blind.belief.states) s = BeliefState::Unknown;
        const PromptParse p{{"pink", "cylinder"}, Direction::Left};
        CHECK_THROWS_AS(resolve_anchor(p, blind), AnchorNotVisible);
    }
    SECTION("ties break to the smaller id") {
        Scene two = scene;
        SceneObject cyl2;
        cyl2.shape = ShapeKind::Cylinder;
        cyl2.size = {0.08, 0.08, 0.10};
        cyl2.pose.position = {0.33, 0.30, 0.06};
        cyl2.color_label = "green";
        cyl2.shape_label = "cylinder";
        REQUIRE(two.try_add_object(cyl2));
        for (uint32_t v : two.objects[2].voxels)
            two.belief.states[v] = BeliefState::ObservedOccupied;
        const PromptParse p{{"cylinder"}, Direction::Left};
        CHECK(resolve_anchor(p, two) == 0);
    }
}

TEST_CASE("region construction follows the direction semantics") {
    const Scene scene = labeled_scene();
    Index3 blo, bhi;
    scene.objects[0].voxel_bbox(scene.spec, &blo, &bhi);

    const RoiBox left = build_roi(scene, 0, Direction::Left);
    CHECK(left.lo.x == 0);
    CHECK(left.hi.x == blo.x - 1);
    CHECK(left.lo.y == 0);
    CHECK(left.hi.y == scene.spec.dims.y - 1);
    CHECK(left.lo.z == 0);
    CHECK(left.hi.z == scene.spec.dims.z - 1);

    const RoiBox right = build_roi(scene, 0, Direction::Right);
    CHECK(right.lo.x == bhi.x + 1);
    CHECK(right.hi.x == scene.spec.dims.x - 1);

    const RoiBox front = build_roi(scene, 0, Direction::Front);
    CHECK(front.hi.y == blo.y - 1);

    const RoiBox behind = build_roi(scene, 0, Direction::Behind);
    CHECK(behind.lo.y == bhi.y + 1);

    SECTION("regions never intersect the anchor") {
        for (const RoiBox& roi : {left, right, front, behind})
            for (uint32_t v : scene.objects[0].voxels)
                REQUIRE_FALSE(roi.contains(scene.spec.unlinear(v)));
    }
    SECTION("opposite directions are disjoint and cover the grid with the anchor slab") {
        CHECK(left.hi.x + 1 == blo.x);
        CHECK(right.lo.x - 1 == bhi.x);
        CHECK(front.hi.y + 1 == blo.y);
        CHECK(behind.lo.y - 1 == bhi.y);
    }
}

TEST_CASE("an anchor flush against the boundary yields an empty region") {
    GridSpec spec;
    spec.dims = {20, 20, 8};
    spec.resolution = 0.02;
    spec.origin = {0.0, 0.0, 0.0};
    Scene scene = Scene::empty(spec);
    SceneObject box;
    box.shape = ShapeKind::Box;
    box.size = {0.08, 0.08, 0.08};
    box.pose.position = {0.0401, 0.2, 0.05};  // touches x = 0
    box.color_label = "red";
    box.shape_label = "box";
    REQUIRE(scene.try_add_object(box));
    Index3 blo, bhi;
    scene.objects[0].voxel_bbox(scene.spec, &blo, &bhi);
    REQUIRE(blo.x == 0);
    CHECK_THROWS_AS(build_roi(scene, 0, Direction::Left), EmptyRoi);
    CHECK_NOTHROW(build_roi(scene, 0, Direction::Right));
}
