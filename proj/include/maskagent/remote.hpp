#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskagent/error.hpp"
#include "maskagent/grammar.hpp"
#include "maskagent/policy.hpp"
#include "maskagent/segmenter.hpp"
#include "maskagent/sft.hpp"

namespace maskagent {

class RemoteError : public Error {
public:
    RemoteError(const std::string& what, int status = 0) : Error(what), status_(status) {}
    // Last HTTP status seen, 0 when no response arrived.
    int status() const { return status_; }

private:
    int status_;
};

struct RemoteEndpoint {
    std::string base_url;  // e.g. http://127.0.0.1:8080
    double timeout = 10.0;  // seconds
    int max_retries = 2;

    void validate() const;
};

// Bounded pool of HTTP connections to one endpoint. Each connection carries
// one request at a time; callers block while all connections are busy.
// Requests failing without a response or with status >= 500 are retried up
// to max_retries times; 4xx replies fail immediately.
class RemoteClient {
public:
    explicit RemoteClient(RemoteEndpoint endpoint, int pool_size = 1);
    ~RemoteClient();
    RemoteClient(const RemoteClient&) = delete;
    RemoteClient& operator=(const RemoteClient&) = delete;

    // POSTs JSON and returns the parsed JSON reply. `task_id`, when given, is
    // sent as the X-Task-Id header.
    nlohmann::json post(const std::string& path, const nlohmann::json& body,
                        const std::optional<std::string>& task_id = std::nullopt) const;

    const RemoteEndpoint& endpoint() const { return endpoint_; }

private:
    struct Pool;
    RemoteEndpoint endpoint_;
    std::unique_ptr<Pool> pool_;
};

// Request bodies, exposed so the wire schema can be checked directly.
nlohmann::json segment_request(const GrayImage& image, std::span<const Action> clicks,
                               const std::optional<NormBox>& box);
nlohmann::json policy_request(const RgbImage& composite, const std::string& prompt, int k);
nlohmann::json prm_request(const RgbImage& composite, const std::string& prompt);

// POST /v1/segment -> {mask_rle: {size, counts}}.
BitMask call_segment(const RemoteClient& client, const GrayImage& image, std::span<const Action> clicks,
                     const std::optional<NormBox>& box, const std::optional<std::string>& task_id = std::nullopt);
// POST /v1/act -> {texts: [...]}.
std::vector<std::string> call_policy(const RemoteClient& client, const RgbImage& composite,
                                     const std::string& prompt, int k,
                                     const std::optional<std::string>& task_id = std::nullopt);
// POST /v1/score -> {text: "Current mIoU: NN"}; returns NN/100.
double call_prm(const RemoteClient& client, const RgbImage& composite, const std::string& prompt,
                const std::optional<std::string>& task_id = std::nullopt);

class RemoteSegmenter final : public Segmenter {
public:
    explicit RemoteSegmenter(std::shared_ptr<const RemoteClient> client);
    BitMask segment(const Task& task, std::span<const Action> clicks,
                    const std::optional<NormBox>& box) const override;

private:
    std::shared_ptr<const RemoteClient> client_;
};

// Sends the overlay composite and instruction prompt; unparseable replies are
// counted as rejected candidates.
class RemotePolicy final : public Policy {
public:
    RemotePolicy(std::shared_ptr<const RemoteClient> client, PromptConfig prompt);
    ProposalBatch propose(const Task& task, const EpisodeState& state, int k,
                          std::uint64_t salt) const override;

private:
    std::shared_ptr<const RemoteClient> client_;
    PromptConfig prompt_;
};

class RemotePrm final : public Prm {
public:
    RemotePrm(std::shared_ptr<const RemoteClient> client, PromptConfig prompt);
    double score(const Task& task, const BitMask& mask) const override;

private:
    std::shared_ptr<const RemoteClient> client_;
    PromptConfig prompt_;
};

// Pixels of a composite whose channels differ, i.e. pixels tinted by a
// chromatic overlay color.
BitMask mask_from_composite(const RgbImage& composite);

struct MockOptions {
    CoordFormat coord_format = CoordFormat::integer;
    int r_neg = 2;
};

// HTTP server answering all three endpoints from local oracles: /v1/segment
// with the oracle segmenter, /v1/act with the click simulator, /v1/score with
// round(100 * IoU). The task is taken from X-Task-Id, or for /v1/segment
// matched by image content.
class MockServer {
public:
    explicit MockServer(std::vector<Task> tasks, MockOptions options = {});
    ~MockServer();
    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    // Binds (port 0 picks a free port), serves on a background thread and
    // returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    // Serves on the calling thread until stop() is called from elsewhere.
    void listen_blocking(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace maskagent
