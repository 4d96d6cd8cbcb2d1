//
// Copyright 2025 The IEForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef IEFORGE_SRC_LLM_GATEWAY_H_
#define IEFORGE_SRC_LLM_GATEWAY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ieforge {

struct ChatMessage {
  std::string role;
  std::string content;
};

// One chat-completions call. Defaults match the evaluation setting: greedy
// decoding, 640-token ceiling. Generation call sites override temperature.
struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 640;
  // Optional variation knob. It travels on the wire and is part of the
  // cache identity, so regeneration attempts get fresh completions even
  // against a caching endpoint or a warm local cache.
  std::optional<uint64_t> seed;
};

class GatewayError : public std::runtime_error {
 public:
  enum class Kind {
    kAuth,        // 401/403, never retried
    kHttp,        // non-retryable status, or retryable one after the budget
    kTransport,   // connect/read failure after the retry budget
    kMalformed,   // 200 with a body we cannot interpret
    kOfflineMiss  // cache miss while network use is disabled
  };

  GatewayError(Kind kind, int http_status, const std::string& what)
      : std::runtime_error(what), kind_(kind), http_status_(http_status) {}

  Kind kind() const { return kind_; }
  int http_status() const { return http_status_; }

 private:
  Kind kind_;
  int http_status_;
};

struct GatewayConfig {
  std::string endpoint_url;  // e.g. "http://127.0.0.1:8080/v1"
  std::string model;
  std::string api_key_env = "IEFORGE_API_KEY";
  int max_in_flight = 4;
  int retry_limit = 3;        // retries after the first attempt
  std::string cache_dir;      // empty disables the response cache
  bool offline = false;       // serve from cache only; a miss is an error
  int initial_backoff_ms = 100;
  double request_timeout_s = 120.0;
};

// Canonical byte form of a request: one JSON object with alphabetically
// sorted keys, endpoint URL included. Two requests that differ only in JSON
// key order share these bytes; switching endpoints never shares them.
std::string CanonicalRequestJson(const ChatRequest& req,
                                 const std::string& endpoint_url);

// SHA-256 of the canonical form; doubles as the cache filename stem.
std::string RequestCacheKey(const ChatRequest& req,
                            const std::string& endpoint_url);

// Thread-safe client for OpenAI-compatible chat-completions endpoints with
// bounded parallelism, exponential backoff, and a content-addressed response
// cache (one JSON file per entry, written atomically).
class LlmGateway {
 public:
  struct Stats {
    uint64_t network_calls = 0;  // HTTP POSTs attempted, including retries
    uint64_t cache_hits = 0;
    uint64_t cache_misses = 0;
    uint64_t retries = 0;
  };

  explicit LlmGateway(GatewayConfig config);
  ~LlmGateway();

  LlmGateway(const LlmGateway&) = delete;
  LlmGateway& operator=(const LlmGateway&) = delete;

  // Completes the request over the network. Retries 429, 5xx, and transport
  // failures with exponential backoff (a 429 Retry-After hint wins); fails
  // fast on auth and other client errors.
  std::string Complete(const ChatRequest& req);

  // complete() behind the cache. Returns the response text and whether it
  // came from the cache. Corrupt cache entries are refetched and rewritten.
  std::pair<std::string, bool> CachedComplete(const ChatRequest& req);

  const GatewayConfig& config() const { return config_; }
  Stats stats() const;

 private:
  struct Impl;

  std::string PostOnce(const std::string& body, int* http_status,
                       std::string* retry_after);

  GatewayConfig config_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ieforge

#endif  // IEFORGE_SRC_LLM_GATEWAY_H_
