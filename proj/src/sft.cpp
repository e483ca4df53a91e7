#include "maskagent/sft.hpp"

#include <nlohmann/json.hpp>

#include "maskagent/error.hpp"
#include "maskagent/pnm.hpp"

namespace maskagent {

void PromptConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must be in [0,1]");
    render_prompt(template_id, "");
}

std::string render_prompt(const std::string& template_id, const std::string& description) {
    if (template_id == "annotator") {
        return "You are refining a segmentation mask. The image shows the current mask as a "
               "translucent colored overlay on top of the photo. Choose one action that makes the "
               "mask match the object more closely.\n"
               "Positive point (x, y): click inside a part of the object that the mask misses; "
               "the mask grows to cover it.\n"
               "Negative point (x, y): click on a region the mask covers by mistake; the mask "
               "shrinks to exclude it.\n"
               "Object: " +
               description + ".";
    }
    if (template_id == "minimal") {
        return "Refine the overlaid mask for: " + description + ". Answer with one positive or negative point.";
    }
    throw InvalidArgument("unknown prompt template '" + template_id + "'");
}

std::vector<SftSample> render_sft(const Trajectory& traj, const Task& task, const PromptConfig& config) {
    config.validate();
    if (traj.task_id != task.id) throw InvalidArgument("trajectory " + traj.task_id + " does not belong to task " + task.id);
    const std::string prompt = render_prompt(config.template_id, task.prompt);
    BitMask current = traj.init_mask.height != 0 ? rle_decode(traj.init_mask)
                                                  : BitMask(task.image.width, task.image.height);
    std::vector<SftSample> samples;
    samples.reserve(traj.steps.size());
    for (const auto& s : traj.steps) {
        std::string target;
        if (config.with_reward) target = format_reward(s.reward_before) + "\n";
        target += format_action(s.action, config.coord_format);
        samples.push_back({render_overlay(task.image, current, config.mask_color, config.alpha), prompt,
                           std::move(target)});
        current = rle_decode(s.mask_after);
    }
    return samples;
}

std::size_t write_sft(const std::filesystem::path& dir, const std::vector<Task>& tasks,
                      const std::vector<Trajectory>& trajectories, const PromptConfig& config) {
    std::string lines;
    std::size_t count = 0;
    for (const auto& traj : trajectories) {
        if (traj.stop_reason == StopReason::failed) continue;
        const Task& task = find_task(tasks, traj.task_id);
        const auto samples = render_sft(traj, task, config);
        for (std::size_t t = 0; t < samples.size(); ++t) {
            const std::string rel = task.id + "/step_" + std::to_string(t) + ".ppm";
            pnm::write_ppm(dir / rel, samples[t].composite);
            nlohmann::json j{{"image_path", rel}, {"prompt", samples[t].prompt}, {"target", samples[t].target}};
            lines += j.dump() + "\n";
            ++count;
        }
    }
    pnm::write_file(dir / "samples.jsonl", lines);
    return count;
}

}  // namespace maskagent
