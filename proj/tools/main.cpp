// maskagent command line: dataset generation, policy improvement, search,
// evaluation and the mock remote services.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "maskagent/eval.hpp"
#include "maskagent/factory.hpp"
#include "maskagent/hash.hpp"
#include "maskagent/improve.hpp"
#include "maskagent/pnm.hpp"
#include "maskagent/search.hpp"
#include "maskagent/sft.hpp"
#include "maskagent/synth.hpp"
#include "maskagent/task.hpp"
#include "maskagent/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace maskagent;

namespace {

// Bad flag or config values; reported like parse errors (exit 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    double tau_stop = 0.95;
    double tau_diff = 0.01;
    int max_steps = 7;
    int k = 1;
    std::string coord_format = "integer";
    std::vector<int> mask_color{0, 255, 0};
    double alpha = 0.5;
    std::uint64_t seed = 0;
    std::string segmenter = "oracle";
    std::string policy = "expert";
    std::string prm = "oracle";
    std::string init = "";  // empty | box | random | mix; command default when unset
    double box_share = 0.1;
    double random_share = 0.1;
    std::string template_id = "annotator";
    bool with_reward = true;
    double convergence_eps = 1e-3;
    int convergence_patience = 2;
    int jobs = 1;
};

// One list drives both directions; keys missing from a config keep defaults.
template <typename J, typename S, typename F>
void each_field(S& s, F&& f) {
    f("tau_stop", s.tau_stop);
    f("tau_diff", s.tau_diff);
    f("max_steps", s.max_steps);
    f("k", s.k);
    f("coord_format", s.coord_format);
    f("mask_color", s.mask_color);
    f("alpha", s.alpha);
    f("seed", s.seed);
    f("segmenter", s.segmenter);
    f("policy", s.policy);
    f("prm", s.prm);
    f("init", s.init);
    f("box_share", s.box_share);
    f("random_share", s.random_share);
    f("template", s.template_id);
    f("with_reward", s.with_reward);
    f("convergence_eps", s.convergence_eps);
    f("convergence_patience", s.convergence_patience);
    f("jobs", s.jobs);
}

void to_json(json& j, const Settings& s) {
    j = json::object();
    each_field<json>(s, [&](const char* key, const auto& v) { j[key] = v; });
}

void from_json(const json& j, Settings& s) {
    each_field<json>(s, [&](const char* key, auto& v) {
        if (j.contains(key)) j.at(key).get_to(v);
    });
}

Settings load_config(const std::string& path) {
    if (path.empty()) return {};
    json j;
    try {
        j = json::parse(pnm::read_file(path));
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config " + path + ": expected a JSON object");
    const json known = Settings{};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key)) throw UsageError("config " + path + ": unknown key '" + key + "'");
    try {
        return j.get<Settings>();
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
}

// Flags shared by every command; each overrides the config file when given.
struct CommonFlags {
    std::string config;
    Settings flag_values;
    std::vector<std::pair<CLI::Option*, std::function<void(Settings&)>>> overrides;

    void add(CLI::App& app) {
        app.add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
        auto& f = flag_values;
        bind(app.add_option("--tau-stop", f.tau_stop, "stop threshold on IoU"), &Settings::tau_stop);
        bind(app.add_option("--tau-diff", f.tau_diff, "minimum IoU gain per kept action"), &Settings::tau_diff);
        bind(app.add_option("--max-steps", f.max_steps, "step budget T"), &Settings::max_steps);
        bind(app.add_option("--k", f.k, "candidates per search step"), &Settings::k);
        bind(app.add_option("--coord-format", f.coord_format, "integer | decimal"), &Settings::coord_format);
        bind(app.add_option("--mask-color", f.mask_color, "overlay color R G B")->expected(3), &Settings::mask_color);
        bind(app.add_option("--alpha", f.alpha, "overlay opacity"), &Settings::alpha);
        bind(app.add_option("--seed", f.seed, "random seed"), &Settings::seed);
        bind(app.add_option("--segmenter", f.segmenter, "oracle | region_grow[:delta[:cap]] | empty | remote:<url>"),
             &Settings::segmenter);
        bind(app.add_option("--policy", f.policy, "expert | noisy[:sigma[:flip]] | remote:<url>"), &Settings::policy);
        bind(app.add_option("--prm", f.prm, "oracle | noisy:<sigma> | remote:<url>"), &Settings::prm);
        bind(app.add_option("--init", f.init, "empty | box | random | mix"), &Settings::init);
        bind(app.add_option("--template", f.template_id, "prompt template"), &Settings::template_id);
        bind(app.add_option("--jobs", f.jobs, "worker threads"), &Settings::jobs);
    }

    template <typename T>
    void bind(CLI::Option* opt, T Settings::*member) {
        overrides.emplace_back(opt, [this, member](Settings& s) { s.*member = flag_values.*member; });
    }

    Settings effective() const {
        Settings s = load_config(config);
        for (const auto& [opt, apply] : overrides)
            if (opt->count() > 0) apply(s);
        return s;
    }
};

struct Context {
    Settings s;
    json config_json;
    std::string config_hash;

    explicit Context(Settings settings) : s(std::move(settings)) {
        validate();
        config_json = s;
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config_json.dump())));
        config_hash = buf;
        omp_set_num_threads(s.jobs);
    }

    void validate() const {
        try {
            env().validate();
            search().validate();
            prompt().validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (s.jobs < 1) throw UsageError("--jobs must be >= 1");
        if (s.mask_color.size() != 3) throw UsageError("mask_color needs three values");
        for (int c : s.mask_color)
            if (c < 0 || c > 255) throw UsageError("mask_color values must be in 0..255");
        static const std::vector<std::string> inits{"", "empty", "box", "random", "mix"};
        if (std::find(inits.begin(), inits.end(), s.init) == inits.end())
            throw UsageError("unknown init '" + s.init + "'");
    }

    EnvConfig env() const { return {s.max_steps, s.tau_stop, s.tau_diff}; }
    SearchConfig search() const { return {s.k, s.max_steps, s.convergence_eps, s.convergence_patience}; }
    PromptConfig prompt() const {
        PromptConfig p;
        try {
            p.coord_format = parse_coord_format(s.coord_format);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        p.mask_color = {static_cast<std::uint8_t>(s.mask_color.at(0)), static_cast<std::uint8_t>(s.mask_color.at(1)),
                        static_cast<std::uint8_t>(s.mask_color.at(2))};
        p.alpha = s.alpha;
        p.template_id = s.template_id;
        p.with_reward = s.with_reward;
        return p;
    }

    std::shared_ptr<const Segmenter> segmenter() const { return make_segmenter(s.segmenter, s.jobs); }
    std::shared_ptr<const Policy> policy() const { return make_policy(s.policy, s.seed, prompt(), s.jobs); }
    std::shared_ptr<const Prm> prm() const { return make_prm(s.prm, s.seed, prompt(), s.jobs); }

    std::vector<InitSpec> inits(const std::vector<Task>& tasks, const std::string& fallback) const {
        const std::string mode = s.init.empty() ? fallback : s.init;
        InitMix mix{0.0, 0.0};
        if (mode == "box") mix = {1.0, 0.0};
        if (mode == "random") mix = {0.0, 1.0};
        if (mode == "mix") mix = {s.box_share, s.random_share};
        return plan_inits(tasks, mix, s.seed);
    }

    json header(const std::string& command) const {
        return {{"command", command}, {"config_hash", config_hash}, {"seed", s.seed}, {"config", config_json}};
    }
};

void write_json(const fs::path& path, const json& j) { pnm::write_file(path, j.dump(2) + "\n"); }

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

template <typename T, typename Key>
void sort_for_output(const Context& ctx, std::vector<T>& items, Key key) {
    // Parallel runs are written in task-id order.
    if (ctx.s.jobs > 1) std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

std::size_t count_steps(const std::vector<Trajectory>& ts) {
    std::size_t n = 0;
    for (const auto& t : ts) n += t.steps.size();
    return n;
}

// Mask files (*.pgm) of a directory keyed by file name.
std::map<std::string, fs::path> mask_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::map<std::string, fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pgm") out[e.path().filename().string()] = e.path();
    return out;
}

std::vector<double> read_numbers(const fs::path& path) {
    const std::string text = pnm::read_file(path);
    try {
        const json j = json::parse(text);
        if (j.is_array()) return j.get<std::vector<double>>();
    } catch (const json::exception&) {
    }
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (in >> token) {
        std::replace(token.begin(), token.end(), ',', ' ');
        std::istringstream parts(token);
        std::string piece;
        while (parts >> piece) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::logic_error&) {
                throw FormatError(path.string() + ": not a number: '" + piece + "'");
            }
        }
    }
    return out;
}

int cmd_synth(const Context& ctx, int n, int side, const fs::path& out) {
    const auto tasks = synth_tasks(n, side, ctx.s.seed);
    save_tasks(out, tasks, {{"header", ctx.header("synth")}});
    std::cout << json{{"tasks", tasks.size()}, {"manifest", (out / "manifest.json").string()}}.dump() << "\n";
    return 0;
}

int cmd_gen_traj(const Context& ctx, const fs::path& tasks_path, const fs::path& out) {
    const auto tasks = load_tasks(tasks_path);
    const auto seg = ctx.segmenter();
    auto trajs = generate_trajectories(tasks, *seg, ctx.env(), ctx.inits(tasks, "mix"));
    sort_for_output(ctx, trajs, [](const Trajectory& t) { return t.task_id; });
    write_jsonl(trajs, out);
    const auto m = describe_dataset(out.stem().string(), {out}, Provenance::generated);
    json j = ctx.header("gen-traj");
    j["dataset"] = manifest_to_json(m);
    j["mean_final_reward"] = mean_final_reward(trajs);
    write_json(manifest_path(out), j);
    std::cout << json{{"trajectories", m.trajectories}, {"steps", m.steps}}.dump() << "\n";
    return 0;
}

int cmd_render_sft(const Context& ctx, const fs::path& tasks_path, const fs::path& traj_path, const fs::path& out) {
    const auto tasks = load_tasks(tasks_path);
    const auto trajs = read_jsonl(traj_path);
    const auto n = write_sft(out, tasks, trajs, ctx.prompt());
    json j = ctx.header("render-sft");
    j["samples"] = n;
    j["source"] = traj_path.string();
    write_json(out / "run_manifest.json", j);
    std::cout << json{{"samples", n}}.dump() << "\n";
    return 0;
}

int cmd_rollout(const Context& ctx, const fs::path& tasks_path, const fs::path& out) {
    const auto tasks = load_tasks(tasks_path);
    const auto seg = ctx.segmenter();
    const auto policy = ctx.policy();
    auto trajs = rollout(*policy, tasks, *seg, ctx.env(), ctx.s.seed, ctx.inits(tasks, "empty"));
    sort_for_output(ctx, trajs, [](const Trajectory& t) { return t.task_id; });
    write_jsonl(trajs, out);
    const auto failed = std::count_if(trajs.begin(), trajs.end(),
                                      [](const Trajectory& t) { return t.stop_reason == StopReason::failed; });
    json j = ctx.header("rollout");
    j["dataset"] = manifest_to_json(describe_dataset(out.stem().string(), {out}, Provenance::rollout));
    j["mean_final_reward"] = mean_final_reward(trajs);
    j["failed"] = failed;
    write_json(manifest_path(out), j);
    std::cout << json{{"trajectories", trajs.size()}, {"mean_final_reward", mean_final_reward(trajs)},
                      {"failed", failed}}
                     .dump()
              << "\n";
    return failed == static_cast<long>(trajs.size()) && !trajs.empty() ? 1 : 0;
}

int cmd_star(const Context& ctx, const fs::path& tasks_path, const std::string& d0_path, const std::string& mode,
             int iterations, double tau_star, const std::string& hook_cmd, bool lenient, const fs::path& out) {
    const auto tasks = load_tasks(tasks_path);
    const auto seg = ctx.segmenter();
    const auto policy = ctx.policy();
    std::vector<Trajectory> d0 = d0_path.empty()
                                     ? generate_trajectories(tasks, *seg, ctx.env(), ctx.inits(tasks, "mix"))
                                     : read_jsonl(d0_path);
    StarConfig cfg;
    try {
        cfg.mode = parse_star_mode(mode);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    cfg.iterations = iterations;
    cfg.tau_star = tau_star;
    cfg.seed = ctx.s.seed;
    cfg.refine.strict_retention = !lenient;
    TrainHook hook;
    if (!hook_cmd.empty()) hook = {TrainHook::Mode::external_command, hook_cmd};
    const auto result = star_iteration(cfg, *policy, d0, tasks, *seg, ctx.env(), hook, out);
    json j = ctx.header("star");
    j["dataset"] = manifest_to_json(result.final_dataset);
    j["reports"] = json::array();
    for (const auto& r : result.reports) j["reports"].push_back(report_to_json(r));
    write_json(out / "run_manifest.json", j);
    std::cout << j["reports"].dump() << "\n";
    return 0;
}

int cmd_search(const Context& ctx, const fs::path& tasks_path, const fs::path& out) {
    const auto tasks = load_tasks(tasks_path);
    const auto seg = ctx.segmenter();
    const auto policy = ctx.policy();
    const auto prm = ctx.prm();
    const auto inits = ctx.inits(tasks, "empty");
    std::vector<SearchResult> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    const long n = static_cast<long>(tasks.size());
    const bool parallel = seg->shareable() && policy->shareable() && prm->shareable();
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        try {
            results[i] = prm_greedy(tasks[i], *policy, *prm, *seg, ctx.search(), inits[i], ctx.s.seed);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Error("search for " + tasks[i].id + ": " + errors[i]);

    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    sort_for_output(ctx, order, [&](std::size_t i) { return tasks[i].id; });
    std::ofstream f;
    fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    f.open(out);
    if (!f) throw IoError("cannot write " + out.string());
    std::vector<MaskPair> pairs;
    for (const auto i : order) {
        f << search_to_json(results[i], tasks[i].id).dump() << "\n";
        pairs.push_back({results[i].best_mask, tasks[i].target});
    }
    f.close();
    const json summary{{"tasks", tasks.size()}, {"ciou", ciou(pairs)}, {"miou", miou(pairs)}};
    json j = ctx.header("search");
    j["summary"] = summary;
    write_json(manifest_path(out), j);
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_eval_ciou(const fs::path& pred_dir, const fs::path& gt_dir) {
    const auto pred = mask_files(pred_dir);
    const auto gt = mask_files(gt_dir);
    std::vector<MaskPair> pairs;
    for (const auto& [name, path] : gt) {
        const auto it = pred.find(name);
        if (it == pred.end()) throw IoError("no prediction for " + name + " in " + pred_dir.string());
        pairs.push_back({pnm::read_mask(it->second), pnm::read_mask(path)});
    }
    for (const auto& [name, path] : pred)
        if (!gt.count(name)) throw IoError("no ground truth for " + name + " in " + gt_dir.string());
    std::cout << json{{"ciou", ciou(pairs)}}.dump() << "\n";
    return 0;
}

int cmd_eval_noc(const Context& ctx, const fs::path& tasks_path, double target, int cap, const std::string& csv) {
    const auto tasks = load_tasks(tasks_path);
    const auto seg = ctx.segmenter();
    const auto results = noc_batch(tasks, *seg, target, cap);
    const auto hist = noc_histogram(results);
    double mean = 0.0;
    int reached = 0;
    for (const auto& r : results) {
        mean += r.clicks;
        reached += r.reached;
    }
    mean /= static_cast<double>(std::max<std::size_t>(1, results.size()));
    if (!csv.empty()) {
        std::ostringstream out;
        out << "click_count,frequency\n";
        for (const auto& [clicks, freq] : hist) out << clicks << "," << freq << "\n";
        pnm::write_file(csv, out.str());
    }
    json h = json::object();
    for (const auto& [clicks, freq] : hist) h[std::to_string(clicks)] = freq;
    std::cout << json{{"tasks", results.size()}, {"target_iou", target}, {"cap", cap}, {"mean_noc", mean},
                      {"reached", reached}, {"histogram", h}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_eval_regression(const fs::path& pred_path, const fs::path& truth_path) {
    const auto pred = read_numbers(pred_path);
    const auto truth = read_numbers(truth_path);
    const auto m = regression_metrics(pred, truth);
    std::cout << json{{"mae", m.mae}, {"mse", m.mse}, {"pearson", m.pearson}, {"spearman", m.spearman},
                      {"n", pred.size()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_eval_filter(const Context& ctx, const fs::path& tasks_path, const fs::path& masks_dir, double threshold) {
    const auto tasks = load_tasks(tasks_path);
    const auto prm = ctx.prm();
    std::vector<ScoredMask> items;
    for (const auto& t : tasks) {
        const fs::path p = masks_dir / (t.id + ".pgm");
        if (!fs::exists(p)) continue;
        items.push_back({&t, pnm::read_mask(p)});
    }
    const auto r = filter_masks(*prm, items, threshold);
    json kept = json::array(), rejected = json::array();
    for (auto i : r.kept) kept.push_back(items[i].task->id);
    for (auto i : r.rejected) rejected.push_back(items[i].task->id);
    std::cout << json{{"threshold", threshold}, {"kept", kept}, {"rejected", rejected}}.dump() << "\n";
    return 0;
}

int cmd_serve_mock(const Context& ctx, const fs::path& tasks_path, const std::string& host, int port) {
    MockOptions opts;
    opts.coord_format = ctx.prompt().coord_format;
    MockServer server(load_tasks(tasks_path), opts);
    if (port == 0) {
        const int bound = server.start(host, 0);
        std::cerr << "serving on http://" << host << ":" << bound << "\n";
        while (true) std::this_thread::sleep_for(std::chrono::hours(1));
    }
    std::cerr << "serving on http://" << host << ":" << port << "\n";
    server.listen_blocking(host, port);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Click-driven mask annotation toolkit"};
    app.require_subcommand(1);
    CommonFlags common;

    std::string tasks_path, out, traj_path, d0_path, star_mode = "star_plus", hook, pred, gt, truth, masks, csv,
                                                     host = "127.0.0.1";
    int n = 10, side = 64, iterations = 1, cap = 20, port = 8080;
    double tau_star = 0.95, target_iou = 0.9, threshold = 0.8;
    bool lenient = false;

    auto* synth = app.add_subcommand("synth", "write synthetic tasks");
    synth->add_option("--n", n, "task count")->check(CLI::PositiveNumber);
    synth->add_option("--side", side, "image side in pixels")->check(CLI::Range(16, 4096));
    synth->add_option("--out", out, "output directory")->required();

    auto* gen = app.add_subcommand("gen-traj", "expert trajectories for a task manifest");
    gen->add_option("--tasks", tasks_path, "task manifest")->required();
    gen->add_option("--out", out, "output JSONL")->required();

    auto* sft = app.add_subcommand("render-sft", "render supervised samples from trajectories");
    sft->add_option("--tasks", tasks_path, "task manifest")->required();
    sft->add_option("--traj", traj_path, "trajectory JSONL")->required();
    sft->add_option("--out", out, "output directory")->required();

    auto* roll = app.add_subcommand("rollout", "greedy policy rollouts");
    roll->add_option("--tasks", tasks_path, "task manifest")->required();
    roll->add_option("--out", out, "output JSONL")->required();

    auto* star = app.add_subcommand("star", "iterative self-training dataset refinement");
    star->add_option("--tasks", tasks_path, "task manifest")->required();
    star->add_option("--d0", d0_path, "initial trajectory JSONL (default: generated)");
    star->add_option("--mode", star_mode, "star | star_plus");
    star->add_option("--iterations", iterations, "iteration count N")->check(CLI::NonNegativeNumber);
    star->add_option("--tau-star", tau_star, "star mode filter threshold");
    star->add_option("--hook", hook, "training command containing {dataset}");
    star->add_flag("--lenient-retention", lenient, "keep actions only when the gain reaches tau_diff");
    star->add_option("--out", out, "output directory")->required();

    auto* search = app.add_subcommand("search", "PRM-guided greedy search");
    search->add_option("--tasks", tasks_path, "task manifest")->required();
    search->add_option("--out", out, "trace JSONL")->required();

    auto* eval = app.add_subcommand("eval", "metrics");
    eval->require_subcommand(1);
    auto* e_ciou = eval->add_subcommand("ciou", "cumulative IoU of two mask directories");
    e_ciou->add_option("--pred", pred, "predicted masks")->required();
    e_ciou->add_option("--gt", gt, "ground-truth masks")->required();
    auto* e_noc = eval->add_subcommand("noc", "clicks needed to reach a target IoU");
    e_noc->add_option("--tasks", tasks_path, "task manifest")->required();
    e_noc->add_option("--target-iou", target_iou, "target IoU");
    e_noc->add_option("--cap", cap, "click cap");
    e_noc->add_option("--csv", csv, "histogram CSV output");
    auto* e_reg = eval->add_subcommand("regression", "predicted vs true IoU");
    e_reg->add_option("--pred", pred, "predicted values")->required();
    e_reg->add_option("--truth", truth, "true values")->required();
    auto* e_filter = eval->add_subcommand("filter", "keep masks the PRM scores above a threshold");
    e_filter->add_option("--tasks", tasks_path, "task manifest")->required();
    e_filter->add_option("--masks", masks, "directory of <task id>.pgm masks")->required();
    e_filter->add_option("--threshold", threshold, "score threshold");

    auto* serve = app.add_subcommand("serve-mock", "oracle-backed segment/act/score server");
    serve->add_option("--tasks", tasks_path, "task manifest")->required();
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port (0 picks one)");

    for (auto* cmd : {synth, gen, sft, roll, star, search, e_ciou, e_noc, e_reg, e_filter, serve}) common.add(*cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        const Context ctx(common.effective());
        if (*synth) return cmd_synth(ctx, n, side, out);
        if (*gen) return cmd_gen_traj(ctx, tasks_path, out);
        if (*sft) return cmd_render_sft(ctx, tasks_path, traj_path, out);
        if (*roll) return cmd_rollout(ctx, tasks_path, out);
        if (*star) return cmd_star(ctx, tasks_path, d0_path, star_mode, iterations, tau_star, hook, lenient, out);
        if (*search) return cmd_search(ctx, tasks_path, out);
        if (*e_ciou) return cmd_eval_ciou(pred, gt);
        if (*e_noc) return cmd_eval_noc(ctx, tasks_path, target_iou, cap, csv);
        if (*e_reg) return cmd_eval_regression(pred, truth);
        if (*e_filter) return cmd_eval_filter(ctx, tasks_path, masks, threshold);
        if (*serve) return cmd_serve_mock(ctx, tasks_path, host, port);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
