//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_ENDPOINT_HPP_
#define CHEMCENSOR_ENDPOINT_HPP_

#include <string>
#include <vector>

#include "chemcensor/harness.hpp"

namespace chemcensor {

// Generic chat-completion HTTP endpoint. Credentials come from the
// environment variable named in api_key_env, never from the config file.
struct EndpointConfig {
  std::string base_url;  // e.g. "http://localhost:8080/v1"
  std::string model;
  std::string api_key_env = "CC_API_KEY";
  double temperature = 1.0;
  int max_tokens = 0;  // 0 = omit from the request
  int timeout_seconds = 120;
  int concurrency = 4;
  int max_retries = 3;
};

EndpointConfig load_endpoint_config(const std::string &path);

// n independent completions with bounded concurrency, per-request timeout
// and retry with backoff. A sample whose retries are exhausted comes back
// as an empty string, never as a silent gap. Throws AuthError when the
// endpoint rejects the credentials.
std::vector<std::string> query_model(const EndpointConfig &config,
                                     const PromptSpec &prompt, int n);

}  // namespace chemcensor

#endif  // CHEMCENSOR_ENDPOINT_HPP_
