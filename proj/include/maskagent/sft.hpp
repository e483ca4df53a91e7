#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maskagent/grammar.hpp"
#include "maskagent/mask.hpp"
#include "maskagent/task.hpp"
#include "maskagent/trajectory.hpp"

namespace maskagent {

struct PromptConfig {
    CoordFormat coord_format = CoordFormat::integer;
    Rgb mask_color = kGreen;
    double alpha = 0.5;
    std::string template_id = "annotator";
    // Prefix each target with the `Current mIoU: NN` line.
    bool with_reward = true;

    void validate() const;
};

// Instruction text for `template_id` with the object description filled in.
// Known templates: "annotator" (full instructions) and "minimal".
std::string render_prompt(const std::string& template_id, const std::string& description);

struct SftSample {
    RgbImage composite;  // image with the pre-action mask overlaid
    std::string prompt;
    std::string target;  // optional reward line, then the action text
};

// One sample per trajectory step.
std::vector<SftSample> render_sft(const Trajectory& traj, const Task& task, const PromptConfig& config);

// Writes <dir>/<task id>/step_<t>.ppm and <dir>/samples.jsonl with
// {image_path, prompt, target}; returns the number of samples written.
std::size_t write_sft(const std::filesystem::path& dir, const std::vector<Task>& tasks,
                      const std::vector<Trajectory>& trajectories, const PromptConfig& config);

}  // namespace maskagent
