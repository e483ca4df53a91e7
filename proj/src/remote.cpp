#include "maskagent/remote.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <httplib.h>

#include "maskagent/base64.hpp"
#include "maskagent/expert.hpp"
#include "maskagent/hash.hpp"
#include "maskagent/pnm.hpp"
#include "maskagent/trajectory.hpp"

namespace maskagent {

using nlohmann::json;

void RemoteEndpoint::validate() const {
    if (base_url.rfind("http://", 0) != 0) throw InvalidArgument("endpoint must be an http:// URL: " + base_url);
    if (!(timeout > 0.0)) throw InvalidArgument("endpoint timeout must be > 0");
    if (max_retries < 0) throw InvalidArgument("endpoint max_retries must be >= 0");
}

struct RemoteClient::Pool {
    std::mutex mutex;
    std::condition_variable available;
    std::vector<std::unique_ptr<httplib::Client>> idle;
};

RemoteClient::RemoteClient(RemoteEndpoint endpoint, int pool_size)
    : endpoint_(std::move(endpoint)), pool_(std::make_unique<Pool>()) {
    endpoint_.validate();
    if (pool_size < 1) throw InvalidArgument("connection pool size must be >= 1");
    const auto secs = static_cast<time_t>(endpoint_.timeout);
    const auto usecs = static_cast<time_t>((endpoint_.timeout - static_cast<double>(secs)) * 1e6);
    for (int i = 0; i < pool_size; ++i) {
        auto c = std::make_unique<httplib::Client>(endpoint_.base_url);
        c->set_connection_timeout(secs, usecs);
        c->set_read_timeout(secs, usecs);
        c->set_write_timeout(secs, usecs);
        pool_->idle.push_back(std::move(c));
    }
}

RemoteClient::~RemoteClient() = default;

json RemoteClient::post(const std::string& path, const json& body,
                        const std::optional<std::string>& task_id) const {
    std::unique_ptr<httplib::Client> conn;
    {
        std::unique_lock lock(pool_->mutex);
        pool_->available.wait(lock, [&] { return !pool_->idle.empty(); });
        conn = std::move(pool_->idle.back());
        pool_->idle.pop_back();
    }
    struct Return {
        Pool& pool;
        std::unique_ptr<httplib::Client>& conn;
        ~Return() {
            {
                std::lock_guard lock(pool.mutex);
                pool.idle.push_back(std::move(conn));
            }
            pool.available.notify_one();
        }
    } give_back{*pool_, conn};

    httplib::Headers headers;
    if (task_id) headers.emplace("X-Task-Id", *task_id);
    const std::string payload = body.dump();
    std::string last_error;
    int last_status = 0;
    for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
        auto res = conn->Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            last_status = 0;
            continue;
        }
        last_status = res->status;
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status >= 400) {
            throw RemoteError(endpoint_.base_url + path + ": HTTP " + std::to_string(res->status) + " " + res->body,
                              res->status);
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw RemoteError(endpoint_.base_url + path + ": reply is not JSON: " + e.what(), res->status);
        }
    }
    throw RemoteError(endpoint_.base_url + path + ": giving up after " + std::to_string(endpoint_.max_retries + 1) +
                          " attempts: " + last_error,
                      last_status);
}

namespace {

constexpr double kWireScale = 1e6;

int pixel_index(double v, int n) { return std::clamp(static_cast<int>(std::floor(v * n)), 0, n - 1); }
int first_index(double v, int n) { return std::clamp(static_cast<int>(std::floor(v * n + 1e-9)), 0, n - 1); }
int last_index(double v, int n) { return std::clamp(static_cast<int>(std::ceil(v * n - 1e-9)) - 1, 0, n - 1); }

double clamp6(double v) { return std::clamp(v, 0.0, (kWireScale - 1) / kWireScale); }

// Six-decimal wire value that the receiver maps to the same pixel index as `v`.
template <typename Index>
double wire_value(double v, int n, Index index) {
    const int want = index(v, n);
    for (const double c : {std::round(v * kWireScale), std::floor(v * kWireScale), std::ceil(v * kWireScale)}) {
        const double w = clamp6(c / kWireScale);
        if (index(w, n) == want) return w;
    }
    return clamp6(std::round((want + 0.5) / n * kWireScale) / kWireScale);
}

}  // namespace

json segment_request(const GrayImage& image, std::span<const Action> clicks, const std::optional<NormBox>& box) {
    const int w = image.width;
    const int h = image.height;
    json jc = json::array();
    for (const auto& a : clicks) {
        if (!a.is_click()) continue;
        jc.push_back({{"sign", a.is_positive() ? 1 : -1},
                      {"x", wire_value(a.point().x, w, pixel_index)},
                      {"y", wire_value(a.point().y, h, pixel_index)}});
    }
    json body{{"image_pgm_b64", base64::encode(pnm::encode_pgm(image))}, {"clicks", std::move(jc)}};
    if (box) {
        body["box"] = {{"x1", wire_value(box->x1, w, first_index)},
                       {"y1", wire_value(box->y1, h, first_index)},
                       {"x2", wire_value(box->x2, w, last_index)},
                       {"y2", wire_value(box->y2, h, last_index)}};
    }
    return body;
}

json policy_request(const RgbImage& composite, const std::string& prompt, int k) {
    return {{"image_ppm_b64", base64::encode(pnm::encode_ppm(composite))}, {"prompt", prompt}, {"n_samples", k}};
}

json prm_request(const RgbImage& composite, const std::string& prompt) {
    return {{"image_ppm_b64", base64::encode(pnm::encode_ppm(composite))}, {"prompt", prompt}};
}

BitMask call_segment(const RemoteClient& client, const GrayImage& image, std::span<const Action> clicks,
                     const std::optional<NormBox>& box, const std::optional<std::string>& task_id) {
    const json reply = client.post("/v1/segment", segment_request(image, clicks, box), task_id);
    BitMask mask;
    try {
        mask = rle_decode(reply.at("mask_rle").get<RleMask>());
    } catch (const std::exception& e) {
        throw RemoteError(std::string("segment reply: ") + e.what());
    }
    if (mask.width() != image.width || mask.height() != image.height) {
        throw RemoteError("segment reply: mask size does not match the image");
    }
    return mask;
}

std::vector<std::string> call_policy(const RemoteClient& client, const RgbImage& composite,
                                     const std::string& prompt, int k, const std::optional<std::string>& task_id) {
    if (k < 1) throw InvalidArgument("n_samples must be >= 1");
    const json reply = client.post("/v1/act", policy_request(composite, prompt, k), task_id);
    try {
        return reply.at("texts").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw RemoteError(std::string("act reply: ") + e.what());
    }
}

double call_prm(const RemoteClient& client, const RgbImage& composite, const std::string& prompt,
                const std::optional<std::string>& task_id) {
    const json reply = client.post("/v1/score", prm_request(composite, prompt), task_id);
    std::string text;
    try {
        text = reply.at("text").get<std::string>();
    } catch (const json::exception& e) {
        throw RemoteError(std::string("score reply: ") + e.what());
    }
    return parse_reward(text);
}

RemoteSegmenter::RemoteSegmenter(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}

BitMask RemoteSegmenter::segment(const Task& task, std::span<const Action> clicks,
                                 const std::optional<NormBox>& box) const {
    return call_segment(*client_, task.image, clicks, box, task.id);
}

RemotePolicy::RemotePolicy(std::shared_ptr<const RemoteClient> client, PromptConfig prompt)
    : client_(std::move(client)), prompt_(std::move(prompt)) {
    prompt_.validate();
}

ProposalBatch RemotePolicy::propose(const Task& task, const EpisodeState& state, int k, std::uint64_t) const {
    const auto composite = render_overlay(task.image, state.mask, prompt_.mask_color, prompt_.alpha);
    const auto texts = call_policy(*client_, composite, render_prompt(prompt_.template_id, task.prompt), k, task.id);
    ProposalBatch out;
    for (const auto& text : texts) {
        try {
            auto parsed = parse_action(text, prompt_.coord_format);
            PolicyProposal p{parsed.action, parsed.stated_reward};
            if (std::find(out.proposals.begin(), out.proposals.end(), p) == out.proposals.end())
                out.proposals.push_back(std::move(p));
        } catch (const ActionParseError&) {
            ++out.rejected;
        }
    }
    return out;
}

RemotePrm::RemotePrm(std::shared_ptr<const RemoteClient> client, PromptConfig prompt)
    : client_(std::move(client)), prompt_(std::move(prompt)) {
    prompt_.validate();
}

double RemotePrm::score(const Task& task, const BitMask& mask) const {
    const auto composite = render_overlay(task.image, mask, prompt_.mask_color, prompt_.alpha);
    return call_prm(*client_, composite, render_prompt(prompt_.template_id, task.prompt), task.id);
}

BitMask mask_from_composite(const RgbImage& composite) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(composite.width) * composite.height);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const auto* px = &composite.pixels[3 * i];
        bits[i] = !(px[0] == px[1] && px[1] == px[2]);
    }
    return BitMask(composite.width, composite.height, std::move(bits));
}

struct MockServer::Impl {
    std::vector<Task> tasks;
    MockOptions options;
    std::unordered_map<std::uint64_t, std::size_t> by_image;
    httplib::Server server;
    std::thread thread;

    std::uint64_t image_key(const GrayImage& img) const {
        std::uint64_t h = fnv1a64(img.pixels);
        h ^= static_cast<std::uint64_t>(img.width) * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(img.height);
        return h;
    }

    const Task* task_by_header(const httplib::Request& req) const {
        if (!req.has_header("X-Task-Id")) return nullptr;
        const auto id = req.get_header_value("X-Task-Id");
        for (const auto& t : tasks)
            if (t.id == id) return &t;
        return nullptr;
    }

    static void reply(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    void install() {
        server.Post("/v1/segment", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const json& body, const httplib::Request& r) { return segment(body, r); });
        });
        server.Post("/v1/act", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const json& body, const httplib::Request& r) { return act(body, r); });
        });
        server.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this](const json& body, const httplib::Request& r) { return score(body, r); });
        });
    }

    struct NotFound : Error {
        using Error::Error;
    };

    template <typename F>
    void handle(const httplib::Request& req, httplib::Response& res, F&& fn) {
        try {
            reply(res, 200, fn(json::parse(req.body), req));
        } catch (const NotFound& e) {
            reply(res, 404, {{"error", e.what()}});
        } catch (const std::exception& e) {
            reply(res, 400, {{"error", e.what()}});
        }
    }

    const Task& require_task(const httplib::Request& req) const {
        if (const Task* t = task_by_header(req)) return *t;
        throw NotFound("unknown or missing X-Task-Id");
    }

    json segment(const json& body, const httplib::Request& req) const {
        const GrayImage image = pnm::decode_pgm(base64::decode(body.at("image_pgm_b64").get<std::string>()));
        const Task* task = task_by_header(req);
        if (!task) {
            const auto it = by_image.find(image_key(image));
            if (it == by_image.end()) throw NotFound("no task matches the request image");
            task = &tasks[it->second];
        }
        if (!(task->image == image)) throw NotFound("request image does not match task " + task->id);
        std::vector<Action> clicks;
        for (const auto& c : body.at("clicks")) {
            const int sign = c.at("sign").get<int>();
            if (sign != 1 && sign != -1) throw FormatError("click sign must be +1 or -1");
            clicks.push_back(Action::click(sign > 0, {c.at("x").get<double>(), c.at("y").get<double>()}));
        }
        std::optional<NormBox> box;
        if (body.contains("box") && !body["box"].is_null()) box = body["box"].get<NormBox>();
        const BitMask mask = oracle_segment(task->target, clicks, box, options.r_neg);
        return {{"mask_rle", rle_encode(mask)}};
    }

    BitMask composite_mask(const json& body, const Task& task) const {
        const RgbImage composite = pnm::decode_ppm(base64::decode(body.at("image_ppm_b64").get<std::string>()));
        if (composite.width != task.image.width || composite.height != task.image.height) {
            throw FormatError("composite size does not match task " + task.id);
        }
        return mask_from_composite(composite);
    }

    json act(const json& body, const httplib::Request& req) const {
        const Task& task = require_task(req);
        const int n = body.at("n_samples").get<int>();
        if (n < 1) throw FormatError("n_samples must be >= 1");
        const BitMask mask = composite_mask(body, task);
        json texts = json::array();
        if (const auto click = next_click(mask, task.target)) {
            const std::string text = format_reward(iou(mask, task.target)) + "\n" + format_action(*click, options.coord_format);
            for (int i = 0; i < n; ++i) texts.push_back(text);
        }
        return {{"texts", std::move(texts)}};
    }

    json score(const json& body, const httplib::Request& req) const {
        const Task& task = require_task(req);
        return {{"text", format_reward(iou(composite_mask(body, task), task.target))}};
    }
};

MockServer::MockServer(std::vector<Task> tasks, MockOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->tasks = std::move(tasks);
    impl_->options = options;
    for (std::size_t i = 0; i < impl_->tasks.size(); ++i)
        impl_->by_image.emplace(impl_->image_key(impl_->tasks[i].image), i);
    impl_->install();
}

MockServer::~MockServer() { stop(); }

int MockServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw IoError("mock server cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void MockServer::listen_blocking(const std::string& host, int port) {
    if (!impl_->server.listen(host, port)) throw IoError("mock server cannot listen on " + host + ":" + std::to_string(port));
}

void MockServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace maskagent
