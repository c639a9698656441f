#include "eqa/cli.hpp"

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "eqa/batch.hpp"
#include "eqa/errors.hpp"

namespace eqa {

namespace {

// "0..24", "7", or "1,4,9".
std::vector<uint64_t> parse_seeds(const std::string& spec) {
    std::vector<uint64_t> out;
    const size_t range = spec.find("..");
    if (range != std::string::npos) {
        const uint64_t lo = std::stoull(spec.substr(0, range));
        const uint64_t hi = std::stoull(spec.substr(range + 2));
        if (hi < lo) throw Error("bad seed range '" + spec + "'");
        for (uint64_t s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    if (out.empty()) throw Error("no seeds in '" + spec + "'");
    return out;
}

void add_gen_options(CLI::App* cmd, WorldGenParams& gen) {
    cmd->add_option("--width", gen.width, "world width in cells");
    cmd->add_option("--height", gen.height, "world height in cells");
    cmd->add_option("--cell-size", gen.cell_size, "meters per cell");
    cmd->add_option("--n-rooms", gen.n_rooms, "number of rooms");
    cmd->add_option("--min-room-cells", gen.min_room_cells, "minimum room footprint");
    cmd->add_option("--n-objects", gen.n_objects, "number of objects");
    cmd->add_option("--template", gen.question_template,
                    "question template (identification|counting|existence|state|location|mixed)");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"gridworld embodied question answering engine"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a config file (sections per subcommand)");

    // generate
    auto* generate = app.add_subcommand("generate", "write scenario files from seeds");
    generate->fallthrough(true);
    std::string gen_seeds = "0..4", gen_out = "worlds";
    WorldGenParams gen_params;
    generate->add_option("--seeds", gen_seeds, "seed list or range, e.g. 0..24");
    generate->add_option("--out", gen_out, "output directory");
    add_gen_options(generate, gen_params);

    // run
    auto* run = app.add_subcommand("run", "run a batch of episodes and emit metrics");
    run->fallthrough(true);
    RunManifest manifest;
    std::string run_seeds = "0..24", ablation = "none";
    run->add_option("--scenario", manifest.scenario_paths, "scenario file(s) to run");
    run->add_option("--seeds", run_seeds, "seeds to generate when no scenario is given");
    add_gen_options(run, manifest.gen);
    run->add_option("--planner", manifest.planner, "scripted | remote");
    run->add_option("--endpoint", manifest.endpoint, "remote planner URL");
    run->add_option("--k", manifest.cfg.k, "visual memory capacity");
    run->add_option("--j", manifest.cfg.j, "max proximity edges per frontier");
    run->add_option("--d", manifest.cfg.d, "max proximity distance, meters");
    run->add_option("--tmax", manifest.cfg.t_max, "max planning steps");
    run->add_option("--conf-threshold", manifest.cfg.conf_threshold, "termination threshold");
    run->add_option("--sampling-period", manifest.cfg.sampling_period, "buffer sampling period");
    run->add_option("--min-cluster-size", manifest.cfg.min_cluster_size, "frontier cluster floor");
    run->add_option("--ablation", ablation, "none|sg-only|vis-only|no-enrich|curr-view");
    run->add_option("--seed", manifest.cfg.seed, "base seed for planner randomness");
    run->add_option("--fov", manifest.cfg.camera.fov_deg, "camera fov, degrees");
    run->add_option("--range", manifest.cfg.camera.max_range_m, "camera range, meters");
    run->add_option("--jobs", manifest.jobs, "episodes run in parallel");
    run->add_option("--out", manifest.out_dir, "output directory")->required();

    // report
    auto* report = app.add_subcommand("report", "aggregate run directories into a summary table");
    report->fallthrough(true);
    std::vector<std::string> report_dirs;
    report->add_option("--in", report_dirs, "run directories")->required();

    std::vector<const char*> argv;
    argv.push_back("eqa");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (generate->parsed()) {
            std::filesystem::create_directories(gen_out);
            for (uint64_t seed : parse_seeds(gen_seeds)) {
                const World w = generate_world(seed, gen_params);
                const std::string path =
                    gen_out + "/scenario_" + std::to_string(seed) + ".txt";
                save_scenario_file(w, path);
                std::cout << path << "\n";
            }
            return 0;
        }
        if (run->parsed()) {
            if (!parse_ablation(ablation, manifest.cfg.ablation)) {
                std::cerr << "unknown ablation '" << ablation << "'\n";
                return 2;
            }
            if (manifest.planner == "remote" && manifest.endpoint.empty()) {
                std::cerr << "--planner remote requires --endpoint\n";
                return 2;
            }
            if (manifest.scenario_paths.empty()) manifest.seeds = parse_seeds(run_seeds);
            for (const auto& p : manifest.scenario_paths)
                if (!std::filesystem::exists(p)) throw Error("scenario file missing: " + p);
            const BatchResult batch = run_batch(manifest);
            write_batch_outputs(manifest, batch);
            std::cout << "wrote " << manifest.out_dir << "/metrics.csv ("
                      << batch.episodes.size() << " episodes, success_rate="
                      << format_fixed(batch.metrics.success_rate_pct, 1) << "%)\n";
            return 0;
        }
        if (report->parsed()) {
            std::cout << report_table(report_dirs);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace eqa
