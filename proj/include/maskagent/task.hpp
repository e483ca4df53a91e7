#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskagent/mask.hpp"

namespace maskagent {

// One annotation problem: image, target mask and object description.
struct Task {
    std::string id;
    GrayImage image;
    BitMask target;
    std::string prompt;

    // Throws InvalidArgument on mismatched dimensions or an empty target.
    void validate() const;
};

// Manifest: {"tasks": [{"id", "image_path", "target_path", "prompt"}], ...}.
// A bare JSON array of task entries is accepted too. Relative paths resolve
// against the manifest's directory.
std::vector<Task> load_tasks(const std::filesystem::path& manifest);

// Writes images/<id>.pgm, targets/<id>.pgm and manifest.json under `dir`.
// `extra` fields are merged into the manifest's top-level object.
void save_tasks(const std::filesystem::path& dir, const std::vector<Task>& tasks,
                const nlohmann::json& extra = nlohmann::json::object());

const Task& find_task(const std::vector<Task>& tasks, const std::string& id);

}  // namespace maskagent
