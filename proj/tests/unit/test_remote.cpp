#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "maskagent/error.hpp"
#include "maskagent/factory.hpp"
#include "maskagent/remote.hpp"
#include "maskagent/synth.hpp"

using namespace maskagent;

namespace {

struct Fixture {
    std::vector<Task> tasks = synth_tasks(6, 32, 3);
    MockServer server{tasks};
    int port = server.start();
    std::shared_ptr<const RemoteClient> client =
        std::make_shared<const RemoteClient>(RemoteEndpoint{"http://127.0.0.1:" + std::to_string(port), 5.0, 1}, 2);
};

}  // namespace

TEST_CASE("segment request schema") {
    const std::vector<Action> clicks{Action::positive({0.5, 0.5}), Action::negative({0.1234567, 0.9})};
    const auto body = segment_request(GrayImage(4, 4, 9), clicks, std::nullopt);
    CHECK(body.at("clicks")[0].at("sign") == 1);
    CHECK(body.at("clicks")[1].at("sign") == -1);
    CHECK(body.at("clicks")[1].at("x").get<double>() == 0.123457);
    CHECK_FALSE(body.contains("box"));
    CHECK(body.dump().find("\"sign\":1") != std::string::npos);
    const auto with_box = segment_request(GrayImage(4, 4, 9), clicks, NormBox{0.1, 0.2, 0.3, 0.4});
    CHECK(with_box.at("box").at("y2").get<double>() == 0.4);
    // wire values never leave the pixel (or box edge) of the original value
    const std::vector<Action> edge{Action::positive({0.9999996, 17.0 / 48.0 - 1e-8})};
    const NormBox b{1.0 / 3.0, 0.0, 17.0 / 48.0, 47.0 / 48.0};
    const auto e = segment_request(GrayImage(48, 48), edge, b);
    const NormPoint sent{e["clicks"][0]["x"].get<double>(), e["clicks"][0]["y"].get<double>()};
    CHECK(sent.valid());
    CHECK(norm_to_pixel(sent, 48, 48) == norm_to_pixel(edge[0].point(), 48, 48));
    const NormBox sent_box{e["box"]["x1"].get<double>(), e["box"]["y1"].get<double>(), e["box"]["x2"].get<double>(),
                           e["box"]["y2"].get<double>()};
    CHECK(box_raster(sent_box, 48, 48) == box_raster(b, 48, 48));
    CHECK_THROWS(RemoteEndpoint{"ftp://x"}.validate());
    CHECK_THROWS(RemoteEndpoint{"http://x", 0.0}.validate());
    CHECK_THROWS(RemoteEndpoint{"http://x", 1.0, -1}.validate());
}

TEST_CASE("mock segment equals local oracle") {
    Fixture f;
    const RemoteSegmenter remote(f.client);
    const OracleSegmenter local;
    for (const auto& t : f.tasks) {
        const auto s = reset(t, InitEmpty{}, local);
        std::vector<Action> clicks{Action::positive(pixel_to_norm({16, 16}, 32, 32)),
                                   Action::negative(pixel_to_norm({15, 16}, 32, 32))};
        CHECK(remote.segment(t, clicks, std::nullopt) == local.segment(t, clicks, std::nullopt));
        const NormBox box{0.0, 0.0, 0.5, 0.5};
        CHECK(remote.segment(t, clicks, box) == local.segment(t, clicks, box));
        // without the task header the image content identifies the task
        CHECK(call_segment(*f.client, t.image, clicks, std::nullopt) == local.segment(t, clicks, std::nullopt));
        (void)s;
    }
}

TEST_CASE("mock policy and PRM") {
    Fixture f;
    const RemotePolicy policy(f.client, PromptConfig{});
    const RemotePrm prm(f.client, PromptConfig{});
    const OracleSegmenter seg;
    for (const auto& t : f.tasks) {
        const auto s = reset(t, InitEmpty{}, seg);
        const auto batch = policy.propose(t, s, 3, 0);
        REQUIRE(batch.proposals.size() == 1);
        CHECK(batch.rejected == 0);
        const auto local = ExpertPolicy().propose(t, s, 1, 0).proposals[0].action;
        CHECK(format_action(batch.proposals[0].action, CoordFormat::integer) ==
              format_action(local, CoordFormat::integer));
        REQUIRE(batch.proposals[0].stated_reward);
        CHECK(*batch.proposals[0].stated_reward == 0.0);

        const auto texts = call_policy(*f.client, render_overlay(t.image, s.mask), "p", 4, t.id);
        CHECK(texts.size() == 4);

        CHECK(prm.score(t, t.target) == 1.0);
        CHECK(prm.score(t, BitMask(32, 32)) == 0.0);
        const BitMask part = t.target & box_raster({0.0, 0.0, 0.5, below_one()}, 32, 32);
        CHECK(std::abs(prm.score(t, part) - iou(part, t.target)) <= 0.005 + 1e-12);
    }
}

TEST_CASE("client errors and retries") {
    httplib::Server srv;
    std::atomic<int> hits{0};
    srv.Post("/v1/score", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
    });
    srv.Post("/v1/act", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("not json", "text/plain");
    });
    srv.Post("/v1/segment", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"mask_rle": {"size": [2, 2], "counts": [4]}})", "application/json");
    });
    srv.Post("/v1/bad", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 404;
    });
    const int port = srv.bind_to_any_port("127.0.0.1");
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();
    const RemoteClient client(RemoteEndpoint{"http://127.0.0.1:" + std::to_string(port), 2.0, 3});

    try {
        call_prm(client, RgbImage{1, 1, {1, 2, 3}}, "p");
        FAIL("expected an error");
    } catch (const RemoteError& e) {
        CHECK(e.status() == 500);
    }
    CHECK(hits == 4);
    hits = 0;
    CHECK_THROWS_AS(client.post("/v1/bad", nlohmann::json::object()), RemoteError);
    CHECK(hits == 1);
    CHECK_THROWS_AS(call_policy(client, RgbImage{1, 1, {1, 2, 3}}, "p", 1), RemoteError);
    CHECK_THROWS_AS(call_segment(client, GrayImage(3, 3), {}, std::nullopt), RemoteError);
    srv.stop();
    th.join();

    const RemoteClient dead(RemoteEndpoint{"http://127.0.0.1:" + std::to_string(port), 0.5, 1});
    CHECK_THROWS_AS(dead.post("/v1/act", nlohmann::json::object()), RemoteError);
}

TEST_CASE("mock rejects bad requests") {
    Fixture f;
    CHECK_THROWS_AS(f.client->post("/v1/act", {{"image_ppm_b64", "!!"}, {"prompt", "p"}, {"n_samples", 1}},
                                   f.tasks[0].id),
                    RemoteError);
    try {
        f.client->post("/v1/score", {{"image_ppm_b64", ""}, {"prompt", "p"}}, std::string("nope"));
    } catch (const RemoteError& e) {
        CHECK(e.status() == 404);
    }
    CHECK_THROWS_AS(call_segment(*f.client, GrayImage(32, 32, 1), {}, std::nullopt), RemoteError);
}

TEST_CASE("factory specs") {
    CHECK(make_segmenter("oracle") != nullptr);
    CHECK(make_segmenter("region_grow:10:100") != nullptr);
    CHECK(make_segmenter("remote:http://127.0.0.1:1") != nullptr);
    CHECK_THROWS_AS(make_segmenter("sam"), InvalidArgument);
    CHECK_THROWS_AS(make_segmenter("region_grow:x"), InvalidArgument);
    CHECK(make_policy("noisy:0.1:0.2", 1, PromptConfig{}) != nullptr);
    CHECK_THROWS_AS(make_policy("noisy:0.1:5", 1, PromptConfig{}), InvalidArgument);
    CHECK(make_prm("noisy:0.05", 1, PromptConfig{}) != nullptr);
    CHECK_THROWS_AS(make_prm("remote:", 1, PromptConfig{}), InvalidArgument);
}
