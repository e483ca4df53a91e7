#include "maskagent/task.hpp"

#include <set>

#include "maskagent/error.hpp"
#include "maskagent/pnm.hpp"

namespace maskagent {

namespace fs = std::filesystem;
using nlohmann::json;

void Task::validate() const {
    if (image.width != target.width() || image.height != target.height()) {
        throw InvalidArgument("task " + id + ": image and target dimensions differ");
    }
    if (!target.any()) throw InvalidArgument("task " + id + ": empty target mask");
}

std::vector<Task> load_tasks(const fs::path& manifest) {
    json doc;
    try {
        doc = json::parse(pnm::read_file(manifest));
    } catch (const json::exception& e) {
        throw FormatError(manifest.string() + ": " + e.what());
    }
    const json& entries = doc.is_array() ? doc : doc.value("tasks", json::array());
    if (!entries.is_array()) throw FormatError(manifest.string() + ": 'tasks' must be an array");
    const fs::path base = manifest.parent_path();
    std::vector<Task> tasks;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const json& e = entries[i];
        try {
            Task t;
            t.id = e.at("id").get<std::string>();
            t.prompt = e.at("prompt").get<std::string>();
            const fs::path img = e.at("image_path").get<std::string>();
            const fs::path tgt = e.at("target_path").get<std::string>();
            t.image = pnm::read_pgm(img.is_absolute() ? img : base / img);
            t.target = pnm::read_mask(tgt.is_absolute() ? tgt : base / tgt);
            t.validate();
            if (!seen.insert(t.id).second) throw InvalidArgument("duplicate task id " + t.id);
            tasks.push_back(std::move(t));
        } catch (const json::exception& ex) {
            throw FormatError(manifest.string() + ": task entry " + std::to_string(i) + ": " +
                              ex.what());
        }
    }
    return tasks;
}

void save_tasks(const fs::path& dir, const std::vector<Task>& tasks, const json& extra) {
    json entries = json::array();
    for (const auto& t : tasks) {
        const std::string img = "images/" + t.id + ".pgm";
        const std::string tgt = "targets/" + t.id + ".pgm";
        pnm::write_pgm(dir / img, t.image);
        pnm::write_mask(dir / tgt, t.target);
        entries.push_back({{"id", t.id}, {"image_path", img}, {"target_path", tgt}, {"prompt", t.prompt}});
    }
    json doc = extra.is_object() ? extra : json::object();
    doc["tasks"] = std::move(entries);
    pnm::write_file(dir / "manifest.json", doc.dump(2) + "\n");
}

const Task& find_task(const std::vector<Task>& tasks, const std::string& id) {
    for (const auto& t : tasks)
        if (t.id == id) return t;
    throw InvalidArgument("unknown task id " + id);
}

}  // namespace maskagent
