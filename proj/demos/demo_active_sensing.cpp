// End-to-end walkthrough: generate a shelf scene, ask for the region behind
// one of its objects, and watch the pipeline pick viewpoints and relocate
// view-blocking items until the region is covered.

#include <iostream>

#include "ars/pipeline.hpp"
#include "ars/report_io.hpp"
#include "ars/scene_gen.hpp"

int main() {
    ars::GenParams params;
    ars::Scene scene = ars::generate_scene(params, 42);
    std::cout << "scene: " << scene.spec.dims.x << "x" << scene.spec.dims.y << "x"
              << scene.spec.dims.z << " voxels, " << scene.objects.size() << " objects\n";

    // Ask about the first object that is visible from the home pose.
    ars::Scene probe = scene;
    ars::CameraConfig cam;
    ars::observe(probe, ars::home_viewpoint(probe), cam);
    std::string prompt;
    for (const ars::SceneObject& obj : probe.objects) {
        bool visible = false;
        for (uint32_t v : obj.voxels)
            visible |= probe.belief.states[v] == ars::BeliefState::ObservedOccupied;
        if (visible) {
            prompt = "Show me behind the " + obj.color_label + " " + obj.shape_label + ".";
            break;
        }
    }
    std::cout << "prompt: " << prompt << "\n";

    ars::PipelineConfig cfg;
    cfg.camera.width = 96;
    cfg.camera.height = 72;
    cfg.seed = 7;
    const ars::RunReport report = ars::run_pipeline(scene, prompt, cfg);

    for (const ars::TraceStep& s : report.trace) {
        std::cout << "  " << ars::step_kind_name(s.kind);
        if (s.kind == ars::StepKind::Remove) std::cout << " object " << s.object_id;
        std::cout << " -> coverage " << s.coverage_after << "\n";
    }
    std::cout << (report.summary.success ? "SUCCESS" : "FAILURE") << ": coverage "
              << report.summary.final_coverage << " with " << report.summary.unique_viewpoints
              << " viewpoints, " << report.summary.objects_moved << " objects moved\n";
    return 0;
}
