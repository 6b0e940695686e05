// Shows the mixture optimizer at work: plan a next-best view for a region
// request and compare its score against plain uniform sampling.

#include <iostream>

#include "ars/language.hpp"
#include "ars/pipeline.hpp"
#include "ars/planner.hpp"
#include "ars/scene_gen.hpp"

int main() {
    ars::Scene scene = ars::generate_scene(ars::GenParams{}, 11);
    ars::CameraConfig cam;
    cam.width = 96;
    cam.height = 72;
    ars::observe(scene, ars::home_viewpoint(scene), cam);

    const ars::PromptParse parse = ars::parse_prompt("Show me to the left of the " +
                                                     scene.objects[2].color_label + " " +
                                                     scene.objects[2].shape_label);
    int32_t anchor = -1;
    try {
        anchor = ars::resolve_anchor(parse, scene);
    } catch (const ars::AnchorNotVisible&) {
        anchor = 2;  // fall back to ground truth for the demo
    }
    const ars::RoiBox roi = ars::build_roi(scene, anchor, parse.direction);

    const ars::OracleScorer scorer(scene, roi, cam);
    ars::PlannerConfig cfg;
    cfg.seed = 3;
    cfg.record_trace = true;
    const ars::PlannerResult result = ars::gmm_mpc(scene, roi, scorer, cfg);

    std::cout << "evaluations: " << result.evaluations << "\n";
    for (size_t i = 0; i < result.trace.size(); ++i) {
        double best = 0.0;
        for (double s : result.trace[i].elite_scores) best = std::max(best, s);
        std::cout << "iteration " << i + 1 << ": best elite " << best << "\n";
    }
    std::cout << "best viewpoint score " << result.best_score << " at ("
              << result.best.position.x << ", " << result.best.position.y << ", "
              << result.best.position.z << ") yaw " << result.best.yaw << " pitch "
              << result.best.pitch << "\n";
    return 0;
}
