// Command-line front door: scene-set generation, training-data collection,
// surrogate training, single runs, and the five-method benchmark.

#include <filesystem>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "ars/bench.hpp"
#include "ars/dataset.hpp"
#include "ars/report_io.hpp"
#include "ars/scene_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitUsage = 2;

// Bad flag values and inconsistent option combinations exit with 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenScenesArgs {
    int count = 100;
    uint64_t seed = 0;
    std::string out;
    ars::GenParams params;
};

int cmd_gen_scenes(const GenScenesArgs& args) {
    fs::create_directories(args.out);
    for (int i = 0; i < args.count; ++i) {
        const ars::Scene scene = ars::generate_scene(args.params, ars::mix_seed(args.seed, i));
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%04d.json", i);
        ars::save_scene_file(scene, (fs::path(args.out) / name).string());
    }
    std::cout << "wrote " << args.count << " scenes to " << args.out << "\n";
    return kExitOk;
}

int cmd_gen_data(size_t samples, uint64_t seed, const std::string& out) {
    const ars::Dataset ds = ars::generate_dataset(samples, ars::GenParams{}, seed);
    ars::save_dataset(ds, out);
    std::cout << "wrote " << ds.samples.size() << " samples (" << ds.count(ars::Split::Train)
              << "/" << ds.count(ars::Split::Val) << "/" << ds.count(ars::Split::Test)
              << " train/val/test) to " << out << "\n"
              << "digest " << std::hex << ars::dataset_digest(ds) << std::dec << "\n";
    return kExitOk;
}

int cmd_train(const std::string& data, const std::string& out, ars::TrainHyper hyper) {
    const ars::Dataset ds = ars::load_dataset(data);
    Eigen::MatrixXd X_train, X_val, X_test;
    Eigen::VectorXd y_train, y_val, y_test;
    ars::dataset_features(ds, ars::Split::Train, &X_train, &y_train);
    ars::dataset_features(ds, ars::Split::Val, &X_val, &y_val);
    ars::dataset_features(ds, ars::Split::Test, &X_test, &y_test);

    ars::TrainReport report;
    const ars::ScorerModel model =
        ars::train_surrogate(X_train, y_train, X_val, y_val, X_test, y_test,
                             {ars::kFeatureLength, 256, 64, 1}, hyper, &report);
    ars::save_model(model, out);
    std::cout << "epochs " << report.epochs_run << "\n"
              << "train MSE " << report.train_mse << "\n"
              << "val   MSE " << report.val_mse << "\n"
              << "test  MSE " << report.test_mse << "\n"
              << "test Spearman (vs targets) " << report.spearman_test << "\n"
              << "model written to " << out << "\n";
    return kExitOk;
}

struct RunArgs {
    std::string scene, prompt, scorer = "oracle-roi", model, strategy = "vb", out;
    uint64_t seed = 0;
    bool dump_belief = false;
};

int cmd_run(const RunArgs& args) {
    ars::PipelineConfig cfg;
    try {
        cfg.scorer = ars::scorer_kind_from_name(args.scorer);
        cfg.strategy = ars::strategy_from_name(args.strategy);
    } catch (const ars::Error& e) {
        throw ConfigError(e.what());
    }
    if (ars::scorer_is_learned(cfg.scorer) && args.model.empty())
        throw ConfigError("learned scorer requires --model");
    ars::Scene scene = ars::load_scene_file(args.scene);
    cfg.seed = args.seed;
    cfg.dump_belief = args.dump_belief;
    ars::ScorerModel model;
    if (ars::scorer_is_learned(cfg.scorer)) {
        model = ars::load_model(args.model);
        cfg.model = &model;
    }
    if (args.dump_belief && !args.out.empty())
        cfg.dump_dir = fs::path(args.out).parent_path().string();

    const ars::RunReport report = ars::run_pipeline(scene, args.prompt, cfg);
    if (!args.out.empty()) ars::save_report(report, args.out);
    std::cout << (report.summary.success ? "SUCCESS" : "FAILURE") << " coverage "
              << report.summary.final_coverage << " viewpoints "
              << report.summary.unique_viewpoints << " objects moved "
              << report.summary.objects_moved << "\n";
    if (!report.summary.success) std::cout << "reason: " << report.summary.failure_reason << "\n";
    return report.summary.success ? kExitOk : kExitRunFailure;
}

struct BenchArgs {
    std::string scenes, methods = "ours,rs-rb,rs-nb,s-vb,s-nb", model, out;
    uint64_t seed = 0;
    bool oracle = false;
    int strata = 3;
};

int cmd_bench(const BenchArgs& args) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(args.scenes))
        if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ars::Error("no .json scenes in " + args.scenes);
    std::vector<ars::Scene> scenes;
    scenes.reserve(files.size());
    for (const std::string& f : files) scenes.push_back(ars::load_scene_file(f));

    std::vector<ars::MethodSpec> methods;
    std::stringstream ss(args.methods);
    std::string name;
    try {
        while (std::getline(ss, name, ','))
            if (!name.empty()) methods.push_back(ars::method_from_name(name, args.oracle));
    } catch (const ars::Error& e) {
        throw ConfigError(e.what());
    }

    ars::BenchConfig cfg;
    cfg.strata_bins = args.strata;
    ars::ScorerModel model;
    bool needs_model = false;
    for (const auto& m : methods) needs_model |= ars::scorer_is_learned(m.scorer);
    if (needs_model) {
        if (args.model.empty()) throw ConfigError("learned scorers require --model");
        model = ars::load_model(args.model);
        cfg.pipeline.model = &model;
    }

    const ars::BenchResult result = ars::run_benchmark(scenes, methods, cfg, args.seed);

    fs::create_directories(args.out);
    auto write = [&](const char* file, const std::string& text) {
        std::ofstream o(fs::path(args.out) / file);
        o << text;
    };
    write("runs.csv", ars::bench_rows_csv(result));
    write("timings.csv", ars::bench_timings_csv(result));
    {
        std::ofstream o(fs::path(args.out) / "summary.json");
        o << ars::bench_summary_json(result).dump(2) << "\n";
    }

    std::cout << std::left << std::setw(8) << "method" << std::right << std::setw(8) << "SR%"
              << std::setw(16) << "objects" << std::setw(16) << "viewpoints" << std::setw(18)
              << "synthetic time\n";
    for (const ars::Aggregate& a : result.aggregates) {
        std::ostringstream mv, vv, tv;
        mv << std::fixed << std::setprecision(2) << a.moved_mean << "+-" << a.moved_std;
        vv << std::fixed << std::setprecision(2) << a.viewpoints_mean << "+-" << a.viewpoints_std;
        tv << std::fixed << std::setprecision(1) << a.time_mean << "+-" << a.time_std;
        std::cout << std::left << std::setw(8) << a.method << std::right << std::setw(8)
                  << a.success_rate << std::setw(16) << mv.str() << std::setw(16) << vv.str()
                  << std::setw(18) << tv.str() << "\n";
    }
    std::cout << "results in " << args.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Language-guided active sensing simulator and benchmark"};
    app.require_subcommand(1);

    GenScenesArgs gs;
    auto* gen_scenes = app.add_subcommand("gen-scenes", "Generate a random scene set");
    gen_scenes->add_option("--count", gs.count, "Number of scenes");
    gen_scenes->add_option("--seed", gs.seed, "Master seed");
    gen_scenes->add_option("--out", gs.out, "Output directory")->required();
    gen_scenes->add_option("--width-min", gs.params.width_m.lo, "Shelf width lower bound (m)");
    gen_scenes->add_option("--width-max", gs.params.width_m.hi, "Shelf width upper bound (m)");
    gen_scenes->add_option("--height-min", gs.params.height_m.lo, "Shelf height lower bound (m)");
    gen_scenes->add_option("--height-max", gs.params.height_m.hi, "Shelf height upper bound (m)");
    gen_scenes->add_option("--depth-min", gs.params.depth_m.lo, "Shelf depth lower bound (m)");
    gen_scenes->add_option("--depth-max", gs.params.depth_m.hi, "Shelf depth upper bound (m)");
    gen_scenes->add_option("--objects-min", gs.params.object_count.lo, "Min object count");
    gen_scenes->add_option("--objects-max", gs.params.object_count.hi, "Max object count");
    gen_scenes->add_option("--resolution", gs.params.resolution, "Voxel edge length (m)");

    size_t gd_samples = 10000;
    uint64_t gd_seed = 0;
    std::string gd_out;
    auto* gen_data = app.add_subcommand("gen-data", "Collect surrogate training samples");
    gen_data->add_option("--samples", gd_samples, "Sample count");
    gen_data->add_option("--seed", gd_seed, "Master seed");
    gen_data->add_option("--out", gd_out, "Output dataset file")->required();

    std::string tr_data, tr_out;
    ars::TrainHyper hyper;
    auto* train = app.add_subcommand("train", "Train the coverage surrogate");
    train->add_option("--data", tr_data, "Dataset file")->required();
    train->add_option("--out", tr_out, "Output model file")->required();
    train->add_option("--lr", hyper.learning_rate, "Learning rate");
    train->add_option("--batch", hyper.batch_size, "Batch size");
    train->add_option("--epochs", hyper.max_epochs, "Max epochs");
    train->add_option("--seed", hyper.seed, "Init/shuffle seed");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run the pipeline on one scene");
    run->add_option("--scene", ra.scene, "Scene file")->required();
    run->add_option("--prompt", ra.prompt, "Region request, e.g. \"Show me behind the red box\"")
        ->required();
    run->add_option("--scorer", ra.scorer,
                    "oracle-roi | learned-roi | oracle-scene | learned-scene");
    run->add_option("--model", ra.model, "Model file (learned scorers)");
    run->add_option("--strategy", ra.strategy, "vb | rb | nb");
    run->add_option("--seed", ra.seed, "Run seed");
    run->add_option("--out", ra.out, "Report file");
    run->add_flag("--dump-belief", ra.dump_belief, "Write per-step belief snapshots");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Compare methods over a scene set");
    bench->add_option("--scenes", ba.scenes, "Scene directory")->required();
    bench->add_option("--methods", ba.methods, "Comma-separated method list");
    bench->add_option("--model", ba.model, "Model file (learned scorers)");
    bench->add_option("--seed", ba.seed, "Master seed");
    bench->add_option("--out", ba.out, "Output directory")->required();
    bench->add_flag("--oracle", ba.oracle, "Use oracle scorers instead of the learned model");
    bench->add_option("--strata", ba.strata, "Region-density strata count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_scenes->parsed()) return cmd_gen_scenes(gs);
        if (gen_data->parsed()) return cmd_gen_data(gd_samples, gd_seed, gd_out);
        if (train->parsed()) return cmd_train(tr_data, tr_out, hyper);
        if (run->parsed()) return cmd_run(ra);
        if (bench->parsed()) return cmd_bench(ba);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ars::MalformedDocument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ars::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    return kExitUsage;
}
