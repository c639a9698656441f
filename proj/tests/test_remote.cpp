#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eqa/enrichment.hpp"
#include "eqa/errors.hpp"
#include "eqa/remote_planner.hpp"
#include "helpers.hpp"

using namespace eqa;

namespace {

// Loopback server running for the lifetime of one test case.
class TestServer {
  public:
    explicit TestServer(httplib::Server::Handler handler) {
        server_.Post("/plan", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~TestServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port_) + "/plan";
    }

  private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

PlannerInput small_input() {
    PlannerInput in;
    in.question = "Is there a couch in the living room?";
    in.choices = {"Yes", "No"};
    in.images = {{ImageRole::CurrentView, "step 0 | pose (1,1) facing E | visible: couch"}};
    in.current_state = "X";
    in.system_prompt = "SYS";
    return in;
}

}  // namespace

TEST_CASE("remote planner round-trips a fixture response") {
    const std::string fixture = test::read_golden("planner_response_confident.json");
    std::string seen_request;
    TestServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_request = req.body;
        res.set_content(fixture, "application/json");
    });

    RemotePlannerConfig cfg;
    cfg.endpoint = server.endpoint();
    const std::string raw = remote_planner_call(cfg, small_input());
    CHECK(raw == fixture);

    // The request on the wire is the canonical rendering.
    CHECK(seen_request == render_planner_request(small_input()));
    const auto parsed = nlohmann::json::parse(seen_request);
    CHECK(parsed.at("question") == "Is there a couch in the living room?");
    CHECK(parsed.at("scene_graph").is_null());

    SceneGraph sg;  // confident response references no nodes
    const PlannerOutput out = validate_planner_output(raw, sg, 2);
    CHECK(out.is_confident);
}

TEST_CASE("persistent 500s exhaust the retries") {
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
    });
    RemotePlannerConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.retries = 2;
    cfg.backoff_ms = 1;
    CHECK_THROWS_AS(remote_planner_call(cfg, small_input()), RetriesExhausted);
    CHECK(hits == 3);
}

TEST_CASE("4xx responses fail immediately as transport errors") {
    std::atomic<int> hits{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 404;
    });
    RemotePlannerConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.retries = 3;
    cfg.backoff_ms = 1;
    CHECK_THROWS_AS(remote_planner_call(cfg, small_input()), TransportError);
    CHECK(hits == 1);
}

TEST_CASE("a malformed body surfaces as SchemaError from validation") {
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content("this is not json", "text/plain");
    });
    RemotePlannerConfig cfg;
    cfg.endpoint = server.endpoint();
    const std::string raw = remote_planner_call(cfg, small_input());
    SceneGraph sg;
    CHECK_THROWS_AS(validate_planner_output(raw, sg, 2), SchemaError);
}

TEST_CASE("a slow server times out when no retries are allowed") {
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.set_content("{}", "application/json");
    });
    RemotePlannerConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.timeout_s = 0.1;
    cfg.retries = 0;
    CHECK_THROWS_AS(remote_planner_call(cfg, small_input()), Timeout);
}

TEST_CASE("unparseable endpoints are rejected up front") {
    RemotePlannerConfig cfg;
    cfg.endpoint = "not-a-url";
    CHECK_THROWS_AS(remote_planner_call(cfg, small_input()), TransportError);
}

TEST_CASE("remote room labeler speaks the pinned wire format") {
    std::string seen_request;
    httplib::Server server;
    server.Post("/label", [&](const httplib::Request& req, httplib::Response& res) {
        seen_request = req.body;
        res.set_content("{\"room_name\": \"kitchen\"}", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RemoteRoomLabeler labeler("http://127.0.0.1:" + std::to_string(port) + "/label");
    CHECK(labeler.label({"stove", "fridge"}) == "kitchen");
    CHECK(seen_request == "{\"objects\":[\"stove\",\"fridge\"]}");

    server.stop();
    thread.join();
}
