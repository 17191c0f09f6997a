//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/endpoint.hpp"

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chemcensor/errors.hpp"

using namespace chemcensor;

namespace {

struct MockServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit MockServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~MockServer() {
    server.stop();
    thread.join();
  }

  EndpointConfig config() const {
    EndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.model = "mock-model";
    cfg.timeout_seconds = 5;
    cfg.concurrency = 3;
    cfg.max_retries = 1;
    return cfg;
  }
};

PromptSpec trivial_prompt() {
  PromptSpec spec;
  spec.rendered = "question";
  spec.target_smiles = "CCO";
  return spec;
}

}  // namespace

TEST_CASE("mock endpoint returns n identical samples") {
  MockServer mock([](const httplib::Request &req, httplib::Response &res) {
    nlohmann::json body = nlohmann::json::parse(req.body);
    CHECK(body["model"] == "mock-model");
    nlohmann::json reply;
    reply["choices"] = {
        {{"message", {{"role", "assistant"},
                      {"content", "<smiles>CCO.CBr</smiles>"}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  auto samples = query_model(mock.config(), trivial_prompt(), 15);
  REQUIRE(samples.size() == 15);
  for (const std::string &s : samples)
    CHECK(s == "<smiles>CCO.CBr</smiles>");
}

TEST_CASE("persistent server errors become empty markers") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request &, httplib::Response &res) {
    ++hits;
    res.status = 500;
  });
  auto cfg = mock.config();
  cfg.max_retries = 1;
  auto samples = query_model(cfg, trivial_prompt(), 4);
  REQUIRE(samples.size() == 4);
  for (const std::string &s : samples)
    CHECK(s.empty());
  CHECK(hits.load() >= 4);
}

TEST_CASE("bounded concurrency keeps wall time under the serial bound") {
  MockServer mock([](const httplib::Request &, httplib::Response &res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    nlohmann::json reply;
    reply["choices"] = {
        {{"message", {{"role", "assistant"}, {"content", "ok"}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  auto cfg = mock.config();
  cfg.concurrency = 3;
  auto t0 = std::chrono::steady_clock::now();
  auto samples = query_model(cfg, trivial_prompt(), 6);
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  REQUIRE(samples.size() == 6);
  // serial would be ~0.6 s; three workers should land near 0.2 s
  CHECK(elapsed < 0.45);
}

TEST_CASE("credential rejection raises AuthError") {
  MockServer mock([](const httplib::Request &, httplib::Response &res) {
    res.status = 401;
  });
  CHECK_THROWS_AS(query_model(mock.config(), trivial_prompt(), 3), AuthError);
}

TEST_CASE("endpoint config parsing") {
  std::string path = "/tmp/cc_endpoint_config.json";
  {
    std::ofstream out(path);
    out << R"({"base_url":"http://h:1/v1","model":"m","concurrency":2})";
  }
  EndpointConfig cfg = load_endpoint_config(path);
  CHECK(cfg.base_url == "http://h:1/v1");
  CHECK(cfg.model == "m");
  CHECK(cfg.concurrency == 2);
  CHECK(cfg.api_key_env == "CC_API_KEY");
  {
    std::ofstream out(path);
    out << R"({"model":"m"})";
  }
  CHECK_THROWS_AS(load_endpoint_config(path), ConfigError);
  std::remove(path.c_str());
}
