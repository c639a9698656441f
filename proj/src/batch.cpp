#include "eqa/batch.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqa/assets.hpp"
#include "eqa/errors.hpp"
#include "eqa/remote_planner.hpp"
#include "eqa/scripted_planner.hpp"

namespace eqa {

namespace {

PlannerFn make_planner(const RunManifest& manifest, uint64_t episode_seed) {
    if (manifest.planner == "scripted") {
        auto planner = std::make_shared<ScriptedPlanner>(episode_seed, Assets::get().stopwords);
        return [planner](const PlannerInput& input, const PlannerContext& ctx) {
            return planner->plan(input, ctx.world, ctx.sg, ctx.mem, ctx.current_view,
                                 ctx.ablation);
        };
    }
    if (manifest.planner == "remote") {
        RemotePlannerConfig rc;
        rc.endpoint = manifest.endpoint;
        return [rc](const PlannerInput& input, const PlannerContext&) {
            return remote_planner_call(rc, input);
        };
    }
    throw Error("unknown planner '" + manifest.planner + "'");
}

World episode_world(const RunManifest& manifest, size_t index) {
    if (!manifest.scenario_paths.empty())
        return load_scenario_file(manifest.scenario_paths[index]);
    return generate_world(manifest.seeds[index], manifest.gen);
}

}  // namespace

BatchResult run_batch(const RunManifest& manifest) {
    const size_t n = manifest.scenario_paths.empty() ? manifest.seeds.size()
                                                     : manifest.scenario_paths.size();
    BatchResult batch;
    batch.episodes.resize(n);

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, manifest.jobs))
    for (size_t i = 0; i < n; ++i) {
        try {
            BatchEpisode ep;
            ep.id = "ep_" + std::to_string(i);
            ep.seed = manifest.scenario_paths.empty() ? manifest.seeds[i] : uint64_t(i);
            const World world = episode_world(manifest, i);
            ep.correct_index = world.question().correct_index;
            EpisodeConfig cfg = manifest.cfg;
            cfg.seed = ep.seed;
            ep.result = run_episode(world, make_planner(manifest, ep.seed), cfg);
            batch.episodes[i] = std::move(ep);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<EpisodeResult> results;
    for (const auto& ep : batch.episodes) results.push_back(ep.result);
    batch.metrics = compute_metrics(results);
    return batch;
}

std::string metrics_csv(const BatchResult& batch) {
    std::string out =
        "episode_id,seed,success,planning_steps,traj_len_m,answer,correct,termination_reason\n";
    for (const auto& ep : batch.episodes) {
        const EpisodeResult& r = ep.result;
        out += ep.id + "," + std::to_string(ep.seed) + "," + (r.success ? "1" : "0") + "," +
               std::to_string(r.planning_steps) + "," + format_fixed(r.trajectory_length_m, 3) +
               "," + (r.answer_index >= 0 ? answer_letter(r.answer_index) : "-") + "," +
               answer_letter(ep.correct_index) + "," +
               termination_reason_name(r.termination_reason) + "\n";
    }
    return out;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["scenario_paths"] = manifest.scenario_paths;
    j["seeds"] = manifest.seeds;
    j["gen"] = {{"width", manifest.gen.width},
                {"height", manifest.gen.height},
                {"cell_size", manifest.gen.cell_size},
                {"n_rooms", manifest.gen.n_rooms},
                {"min_room_cells", manifest.gen.min_room_cells},
                {"n_objects", manifest.gen.n_objects},
                {"question_template", manifest.gen.question_template}};
    j["planner"] = manifest.planner;
    j["endpoint"] = manifest.endpoint;
    j["config"] = {{"t_max", manifest.cfg.t_max},
                   {"conf_threshold", manifest.cfg.conf_threshold},
                   {"k", manifest.cfg.k},
                   {"j", manifest.cfg.j},
                   {"d", manifest.cfg.d},
                   {"sampling_period", manifest.cfg.sampling_period},
                   {"min_cluster_size", manifest.cfg.min_cluster_size},
                   {"ablation", ablation_name(manifest.cfg.ablation)},
                   {"fov_deg", manifest.cfg.camera.fov_deg},
                   {"max_range_m", manifest.cfg.camera.max_range_m}};
    j["jobs"] = manifest.jobs;
    return j.dump(2) + "\n";
}

std::string trajectory_svg(const World& world, const EpisodeResult& result) {
    const int s = 12;  // pixels per cell
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << world.width() * s
        << "\" height=\"" << world.height() * s << "\">\n";
    for (int y = 0; y < world.height(); ++y)
        for (int x = 0; x < world.width(); ++x) {
            const char* fill =
                world.occupancy({x, y}) == CellState::Occupied ? "#30303a" : "#f2f0e9";
            out << "<rect x=\"" << x * s << "\" y=\"" << y * s << "\" width=\"" << s
                << "\" height=\"" << s << "\" fill=\"" << fill << "\"/>\n";
        }
    for (const auto& o : world.objects())
        out << "<rect x=\"" << o.cell.x * s + 3 << "\" y=\"" << o.cell.y * s + 3 << "\" width=\""
            << s - 6 << "\" height=\"" << s - 6 << "\" fill=\"#c98a2b\"><title>" << o.id << " "
            << o.label << "</title></rect>\n";
    if (!result.path_taken.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#2b6cc9\" stroke-width=\"2\" points=\"";
        for (const auto& p : result.path_taken)
            out << p.cell.x * s + s / 2 << "," << p.cell.y * s + s / 2 << " ";
        out << "\"/>\n";
    }
    const double scale = double(s) / world.cell_size();
    for (const auto& c : result.final_frontier_centroids)
        out << "<circle cx=\"" << format_fixed(c.x * scale, 1) << "\" cy=\""
            << format_fixed(c.y * scale, 1) << "\" r=\"4\" fill=\"none\" stroke=\"#b03a48\" "
               "stroke-width=\"2\"/>\n";
    const Cell spawn = world.agent_spawn().cell;
    out << "<circle cx=\"" << spawn.x * s + s / 2 << "\" cy=\"" << spawn.y * s + s / 2
        << "\" r=\"4\" fill=\"#2f9d4e\"/>\n";
    if (!result.path_taken.empty()) {
        const Cell end = result.path_taken.back().cell;
        out << "<circle cx=\"" << end.x * s + s / 2 << "\" cy=\"" << end.y * s + s / 2
            << "\" r=\"4\" fill=\"#b03a48\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

namespace {

std::string summary_line(const Metrics& m) {
    std::string out = "n=" + std::to_string(m.n) +
                      " success_rate=" + format_fixed(m.success_rate_pct, 1) + "%";
    out += " avg_steps=";
    out += m.avg_planning_steps ? format_fixed(*m.avg_planning_steps, 2) : "-";
    out += " avg_traj_len_m=";
    out += m.avg_traj_len_m ? format_fixed(*m.avg_traj_len_m, 3) : "-";
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace

void write_batch_outputs(const RunManifest& manifest, const BatchResult& batch) {
    namespace fs = std::filesystem;
    const fs::path dir(manifest.out_dir);
    fs::create_directories(dir);

    write_file(dir / "metrics.csv", metrics_csv(batch));
    write_file(dir / "manifest.json", manifest_json(manifest));
    write_file(dir / "summary.txt", summary_line(batch.metrics) + "\n");

    for (size_t i = 0; i < batch.episodes.size(); ++i) {
        const BatchEpisode& ep = batch.episodes[i];
        std::string transcript;
        for (const auto& rec : ep.result.transcript) transcript += step_record_json(rec) + "\n";
        write_file(dir / (ep.id + "_transcript.jsonl"), transcript);
        const World world = episode_world(manifest, i);
        write_file(dir / (ep.id + "_trajectory.svg"), trajectory_svg(world, ep.result));
    }
}

std::string report_table(const std::vector<std::string>& run_dirs) {
    std::ostringstream out;
    out << "method    | ablation  | n   | success_rate_pct | avg_steps | avg_L_tau_m\n";
    for (const auto& dir : run_dirs) {
        std::ifstream mf(dir + "/manifest.json");
        if (!mf) throw Error("report: missing manifest.json in " + dir);
        nlohmann::json manifest = nlohmann::json::parse(mf);

        std::ifstream csv(dir + "/metrics.csv");
        if (!csv) throw Error("report: missing metrics.csv in " + dir);
        std::string line;
        std::getline(csv, line);  // header
        int n = 0, successes = 0;
        double steps = 0, length = 0;
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cols;
            std::stringstream ss(line);
            std::string col;
            while (std::getline(ss, col, ',')) cols.push_back(col);
            if (cols.size() != 8) throw Error("report: malformed row in " + dir + ": " + line);
            ++n;
            if (cols[2] == "1") {
                ++successes;
                steps += std::stod(cols[3]);
                length += std::stod(cols[4]);
            }
        }
        const double rate = n ? 100.0 * successes / n : 0.0;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-9s | %-9s | %-3d | %-16.1f | %-9s | %s\n",
                      manifest["planner"].get<std::string>().c_str(),
                      manifest["config"]["ablation"].get<std::string>().c_str(), n, rate,
                      successes ? format_fixed(steps / successes, 2).c_str() : "-",
                      successes ? format_fixed(length / successes, 3).c_str() : "-");
        out << buf;
    }
    return out.str();
}

}  // namespace eqa
