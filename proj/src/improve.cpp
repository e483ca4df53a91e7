#include "maskagent/improve.hpp"

#include <cstdlib>

#include "maskagent/error.hpp"
#include "maskagent/pnm.hpp"

namespace maskagent {

namespace fs = std::filesystem;
using nlohmann::json;

Trajectory rollout_one(const Policy& policy, const Task& task, const Segmenter& segmenter,
                       const EnvConfig& config, std::uint64_t seed, const InitSpec& init) {
    Trajectory traj;
    traj.task_id = task.id;
    traj.init = init;
    try {
        EpisodeState state = reset(task, init, segmenter);
        traj.init_mask = rle_encode(state.mask);
        double current = reward(state.mask, task.target);
        traj.final_reward = current;
        if (current >= config.tau_stop) {
            traj.stop_reason = StopReason::reached_tau_stop;
            return traj;
        }
        while (true) {
            const auto batch = policy.propose(task, state, 1, seed);
            if (batch.proposals.empty()) {
                traj.stop_reason = StopReason::policy_exhausted;
                break;
            }
            const Action& a = batch.proposals.front().action;
            StepResult res = step(state, a, task, segmenter, config);
            traj.steps.push_back({a, rle_encode(res.state.mask), current, res.reward, false});
            current = res.reward;
            traj.final_reward = current;
            state = std::move(res.state);
            if (res.done) {
                traj.stop_reason = res.stop_reason;
                break;
            }
        }
    } catch (const std::exception& e) {
        traj.stop_reason = StopReason::failed;
        traj.error = e.what();
        if (traj.init_mask.height == 0) traj.init_mask = rle_encode(BitMask(task.image.width, task.image.height));
    }
    return traj;
}

namespace {

const InitSpec& init_at(const std::vector<InitSpec>& inits, std::size_t i) {
    static const InitSpec empty = InitEmpty{};
    return inits.empty() ? empty : inits.at(i);
}

}  // namespace

std::vector<Trajectory> rollout_serial(const Policy& policy, const std::vector<Task>& tasks,
                                       const Segmenter& segmenter, const EnvConfig& config,
                                       std::uint64_t seed, const std::vector<InitSpec>& inits) {
    config.validate();
    std::vector<Trajectory> out;
    out.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        out.push_back(rollout_one(policy, tasks[i], segmenter, config, seed, init_at(inits, i)));
    return out;
}

std::vector<Trajectory> rollout(const Policy& policy, const std::vector<Task>& tasks,
                                const Segmenter& segmenter, const EnvConfig& config,
                                std::uint64_t seed, const std::vector<InitSpec>& inits) {
    config.validate();
    if (!inits.empty() && inits.size() != tasks.size()) throw InvalidArgument("one init spec per task expected");
    std::vector<Trajectory> out(tasks.size());
    const long n = static_cast<long>(tasks.size());
    const bool parallel = policy.shareable() && segmenter.shareable();
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i)
        out[i] = rollout_one(policy, tasks[i], segmenter, config, seed, init_at(inits, i));
    return out;
}

Trajectory refine_star_plus(const Trajectory& rollout_traj, const Task& task, const Segmenter& segmenter,
                            const EnvConfig& config, const RefineOptions& options) {
    const auto corrupt = [&](const std::string& what) {
        throw CorruptInput("refine " + rollout_traj.task_id + ": " + what);
    };
    if (rollout_traj.task_id != task.id) corrupt("trajectory belongs to another task");

    EpisodeState state = reset(task, rollout_traj.init, segmenter);
    if (rollout_traj.init_mask.height != 0 && rle_encode(state.mask) != rollout_traj.init_mask) {
        corrupt("initial mask does not match");
    }
    Trajectory out;
    out.task_id = task.id;
    out.init = rollout_traj.init;
    out.init_mask = rle_encode(state.mask);
    double current = reward(state.mask, task.target);

    bool diverted = false;
    for (std::size_t i = 0; i < rollout_traj.steps.size(); ++i) {
        const auto& s = rollout_traj.steps[i];
        StepResult res;
        try {
            res = step(state, s.action, task, segmenter, config);
        } catch (const InvalidArgument& e) {
            corrupt("cannot replay step " + std::to_string(i) + ": " + e.what());
        }
        if (rle_encode(res.state.mask) != s.mask_after) corrupt("mask mismatch at step " + std::to_string(i));

        const double gain = res.reward - current;
        const bool keep = gain > 0.0 && (options.strict_retention || gain >= config.tau_diff);
        if (!keep) {
            diverted = true;
            break;
        }
        out.steps.push_back({s.action, s.mask_after, current, res.reward, false});
        current = res.reward;
        state = std::move(res.state);
        if (res.done) {
            out.final_reward = current;
            out.stop_reason = res.stop_reason;
            return out;
        }
    }

    if (diverted || rollout_traj.steps.empty()) {
        state.finished = false;
        extend_with_expert(out, std::move(state), task, segmenter, config, diverted);
        return out;
    }
    out.final_reward = current;
    out.stop_reason = rollout_traj.stop_reason;
    return out;
}

std::vector<Trajectory> star_filter(const std::vector<Trajectory>& trajectories, double tau_star) {
    if (!(tau_star >= 0.0 && tau_star <= 1.0)) throw InvalidArgument("tau_star must be in [0,1]");
    std::vector<Trajectory> kept;
    for (const auto& t : trajectories)
        if (t.stop_reason != StopReason::failed && t.final_reward >= tau_star) kept.push_back(t);
    return kept;
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::generated: return "generated";
        case Provenance::rollout: return "rollout";
        case Provenance::refined: return "refined";
        case Provenance::merged: return "merged";
    }
    return "unknown";
}

Provenance parse_provenance(std::string_view text) {
    for (auto p : {Provenance::generated, Provenance::rollout, Provenance::refined, Provenance::merged})
        if (to_string(p) == text) return p;
    throw FormatError("unknown provenance '" + std::string(text) + "'");
}

json manifest_to_json(const DatasetManifest& m) {
    return {{"name", m.name},
            {"files", m.files},
            {"provenance", to_string(m.provenance)},
            {"counts", {{"trajectories", m.trajectories}, {"steps", m.steps}}}};
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    m.name = j.at("name").get<std::string>();
    m.files = j.at("files").get<std::vector<std::string>>();
    m.provenance = parse_provenance(j.at("provenance").get<std::string>());
    m.trajectories = j.at("counts").at("trajectories").get<std::size_t>();
    m.steps = j.at("counts").at("steps").get<std::size_t>();
    return m;
}

DatasetManifest describe_dataset(std::string name, std::vector<fs::path> files, Provenance provenance) {
    DatasetManifest m{std::move(name), {}, provenance, 0, 0};
    for (const auto& f : files) {
        for (const auto& t : read_jsonl(f)) {
            ++m.trajectories;
            m.steps += t.steps.size();
        }
        m.files.push_back(f.string());
    }
    return m;
}

void validate_manifest(const DatasetManifest& m) {
    std::vector<fs::path> files(m.files.begin(), m.files.end());
    const DatasetManifest actual = describe_dataset(m.name, files, m.provenance);
    if (actual.trajectories != m.trajectories || actual.steps != m.steps) {
        throw CorruptInput("dataset " + m.name + ": recorded counts do not match file contents");
    }
}

void TrainHook::validate() const {
    if (mode == Mode::external_command && command_template.find("{dataset}") == std::string::npos) {
        throw InvalidArgument("train hook command must contain a {dataset} placeholder");
    }
}

void TrainHook::invoke(const fs::path& dataset) const {
    validate();
    if (mode == Mode::emit_only) return;
    std::string cmd = command_template;
    const std::string key = "{dataset}";
    for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos)) {
        cmd.replace(pos, key.size(), dataset.string());
        pos += dataset.string().size();
    }
    const int status = std::system(cmd.c_str());
    if (status != 0) throw Error("train hook exited with status " + std::to_string(status) + ": " + cmd);
}

std::string_view to_string(StarMode mode) { return mode == StarMode::star ? "star" : "star_plus"; }

StarMode parse_star_mode(std::string_view text) {
    if (text == "star") return StarMode::star;
    if (text == "star_plus" || text == "star+") return StarMode::star_plus;
    throw InvalidArgument("unknown star mode '" + std::string(text) + "'");
}

json report_to_json(const IterationReport& r) {
    return {{"iteration", r.iteration},
            {"n_rollouts", r.n_rollouts},
            {"n_corrections", r.n_corrections},
            {"mean_reward_raw", r.mean_reward_raw},
            {"mean_reward_refined", r.mean_reward_refined},
            {"train_size", r.train_size}};
}

StarResult star_iteration(const StarConfig& config, const Policy& policy, const std::vector<Trajectory>& d0,
                          const std::vector<Task>& tasks, const Segmenter& segmenter,
                          const EnvConfig& env_config, const TrainHook& hook, const fs::path& out_dir) {
    if (config.iterations < 0) throw InvalidArgument("iteration count must be >= 0");
    hook.validate();
    const fs::path d0_path = out_dir / "d0.jsonl";
    write_jsonl(d0, d0_path);

    StarResult result;
    result.final_dataset = describe_dataset("d0", {d0_path}, Provenance::generated);
    json all_reports = json::array();
    for (int n = 1; n <= config.iterations; ++n) {
        const fs::path iter_dir = out_dir / ("iter_" + std::to_string(n));
        const auto raw = rollout(policy, tasks, segmenter, env_config, config.seed + static_cast<std::uint64_t>(n));
        write_jsonl(raw, iter_dir / "rollouts.jsonl");

        IterationReport report;
        report.iteration = n;
        report.n_rollouts = raw.size();
        report.mean_reward_raw = mean_final_reward(raw);

        std::vector<Trajectory> dn;
        if (config.mode == StarMode::star) {
            dn = star_filter(raw, config.tau_star);
        } else {
            dn.resize(raw.size());
            const long count = static_cast<long>(raw.size());
#pragma omp parallel for schedule(dynamic) if (segmenter.shareable())
            for (long i = 0; i < count; ++i) {
                try {
                    dn[i] = refine_star_plus(raw[i], find_task(tasks, raw[i].task_id), segmenter,
                                             env_config, config.refine);
                } catch (const std::exception& e) {
                    dn[i] = raw[i];
                    dn[i].stop_reason = StopReason::failed;
                    dn[i].error = e.what();
                }
            }
            for (std::size_t i = 0; i < raw.size(); ++i)
                if (dn[i].stop_reason != StopReason::failed && !(dn[i] == raw[i])) ++report.n_corrections;
            std::erase_if(dn, [](const Trajectory& t) { return t.stop_reason == StopReason::failed; });
        }
        report.mean_reward_refined = mean_final_reward(dn);
        const fs::path dn_path = iter_dir / "dn.jsonl";
        write_jsonl(dn, dn_path);

        // star trains on D_n alone; star_plus on D_0 and D_n together.
        std::vector<Trajectory> train = dn;
        if (config.mode == StarMode::star_plus) {
            train = d0;
            train.insert(train.end(), dn.begin(), dn.end());
        }
        const fs::path train_path = iter_dir / "train.jsonl";
        write_jsonl(train, train_path);
        report.train_size = train.size();

        hook.invoke(train_path);
        result.final_dataset = describe_dataset(
            "iter_" + std::to_string(n), {train_path},
            config.mode == StarMode::star_plus ? Provenance::merged : Provenance::refined);
        pnm::write_file(iter_dir / "report.json", report_to_json(report).dump(2) + "\n");
        all_reports.push_back(report_to_json(report));
        result.reports.push_back(report);
    }
    pnm::write_file(out_dir / "reports.json", all_reports.dump(2) + "\n");
    pnm::write_file(out_dir / "dataset.json", manifest_to_json(result.final_dataset).dump(2) + "\n");
    return result;
}

}  // namespace maskagent
