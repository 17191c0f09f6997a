//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/endpoint.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chemcensor/errors.hpp"

namespace chemcensor {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string scheme_host_port;  // httplib client target
  std::string path_prefix;
};

ParsedUrl parse_url(const std::string &url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint base_url needs a scheme: '" + url + "'");
  size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.scheme_host_port = url;
  } else {
    out.scheme_host_port = url.substr(0, path_start);
    out.path_prefix = url.substr(path_start);
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/')
      out.path_prefix.pop_back();
  }
  return out;
}

}  // namespace

EndpointConfig load_endpoint_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open endpoint config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw FormatError("endpoint config: " + std::string(e.what()));
  }
  EndpointConfig cfg;
  cfg.base_url = j.value("base_url", "");
  cfg.model = j.value("model", "");
  cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
  cfg.temperature = j.value("temperature", cfg.temperature);
  cfg.max_tokens = j.value("max_tokens", cfg.max_tokens);
  cfg.timeout_seconds = j.value("timeout_seconds", cfg.timeout_seconds);
  cfg.concurrency = j.value("concurrency", cfg.concurrency);
  cfg.max_retries = j.value("max_retries", cfg.max_retries);
  if (cfg.base_url.empty() || cfg.model.empty())
    throw ConfigError("endpoint config needs base_url and model");
  return cfg;
}

std::vector<std::string> query_model(const EndpointConfig &config,
                                     const PromptSpec &prompt, int n) {
  if (n < 1)
    throw ConfigError("completion count must be positive");
  ParsedUrl url = parse_url(config.base_url);

  json body;
  body["model"] = config.model;
  body["messages"] = json::array(
      {json{{"role", "user"}, {"content", prompt.rendered}}});
  body["temperature"] = config.temperature;
  if (config.max_tokens > 0)
    body["max_tokens"] = config.max_tokens;
  const std::string payload = body.dump();
  const std::string route = url.path_prefix + "/chat/completions";

  const char *key = std::getenv(config.api_key_env.c_str());
  httplib::Headers headers;
  if (key != nullptr && key[0] != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::vector<std::string> samples(static_cast<size_t>(n));
  std::atomic<int> next{0};
  std::atomic<bool> auth_failed{false};
  std::mutex auth_mutex;
  std::string auth_detail;

  auto worker = [&] {
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);

    while (true) {
      int i = next.fetch_add(1);
      if (i >= n || auth_failed.load())
        return;
      std::string sample;
      for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0)
          std::this_thread::sleep_for(
              std::chrono::milliseconds(250LL << (attempt - 1)));
        httplib::Result res =
            client.Post(route, headers, payload, "application/json");
        if (!res)
          continue;  // transport error, retry
        if (res->status == 401 || res->status == 403) {
          std::lock_guard<std::mutex> lock(auth_mutex);
          auth_failed.store(true);
          auth_detail = "endpoint returned HTTP " +
                        std::to_string(res->status);
          return;
        }
        if (res->status < 200 || res->status >= 300)
          continue;  // server error, retry
        try {
          json rj = json::parse(res->body);
          const auto &choices = rj.at("choices");
          if (!choices.empty()) {
            const auto &msg = choices.at(0).at("message");
            sample = msg.value("content", "");
          }
        } catch (const std::exception &) {
          sample.clear();
        }
        break;
      }
      samples[static_cast<size_t>(i)] = sample;
    }
  };

  int workers = std::min(n, std::max(1, config.concurrency));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();

  if (auth_failed.load())
    throw AuthError(auth_detail);
  return samples;
}

}  // namespace chemcensor
