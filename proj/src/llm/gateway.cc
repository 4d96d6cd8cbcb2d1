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

#include "llm/gateway.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "util/digest.h"
#include "util/fsio.h"

namespace ieforge {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Endpoint URL -> (scheme://host:port, request path). Accepts a bare origin,
// a base ending in /v1, or a full /chat/completions path.
std::pair<std::string, std::string> SplitEndpoint(const std::string& url) {
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("endpoint_url has no scheme: " + url);
  }
  size_t slash = url.find('/', scheme + 3);
  std::string origin = (slash == std::string::npos) ? url : url.substr(0, slash);
  std::string path = (slash == std::string::npos) ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (path.ends_with("/chat/completions")) {
    return {origin, path};
  }
  return {origin, path + "/v1/chat/completions"};
}

json RequestBodyJson(const ChatRequest& req) {
  json body;
  body["model"] = req.model;
  body["messages"] = json::array();
  for (const ChatMessage& m : req.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;
  if (req.seed) body["seed"] = *req.seed;
  return body;
}

bool IsRetryableStatus(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

std::string HttpErrorDetail(int status, const std::string& body) {
  std::string msg = "HTTP " + std::to_string(status);
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_object() && parsed.contains("error")) {
    const json& err = parsed["error"];
    if (err.is_object() && err.contains("message") &&
        err["message"].is_string()) {
      msg += ": " + err["message"].get<std::string>();
    } else if (err.is_string()) {
      msg += ": " + err.get<std::string>();
    }
  }
  return msg;
}

class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count > 0 ? count : 1) {}

  void Acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return count_ > 0; });
    --count_;
  }

  void Release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int count_;
};

}  // namespace

std::string CanonicalRequestJson(const ChatRequest& req,
                                 const std::string& endpoint_url) {
  // nlohmann::json orders object keys alphabetically, which is exactly the
  // canonicalization we want: key order on the way in cannot matter.
  json canon = RequestBodyJson(req);
  canon["endpoint"] = endpoint_url;
  return canon.dump();
}

std::string RequestCacheKey(const ChatRequest& req,
                            const std::string& endpoint_url) {
  return Sha256Hex(CanonicalRequestJson(req, endpoint_url));
}

struct LlmGateway::Impl {
  std::string origin;
  std::string path;
  Semaphore in_flight;
  std::atomic<uint64_t> network_calls{0};
  std::atomic<uint64_t> cache_hits{0};
  std::atomic<uint64_t> cache_misses{0};
  std::atomic<uint64_t> retries{0};

  explicit Impl(const GatewayConfig& cfg) : in_flight(cfg.max_in_flight) {
    std::tie(origin, path) = SplitEndpoint(cfg.endpoint_url);
  }
};

LlmGateway::LlmGateway(GatewayConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_)) {}

LlmGateway::~LlmGateway() = default;

LlmGateway::Stats LlmGateway::stats() const {
  Stats s;
  s.network_calls = impl_->network_calls.load();
  s.cache_hits = impl_->cache_hits.load();
  s.cache_misses = impl_->cache_misses.load();
  s.retries = impl_->retries.load();
  return s;
}

std::string LlmGateway::PostOnce(const std::string& body, int* http_status,
                                 std::string* retry_after) {
  impl_->network_calls.fetch_add(1);
  httplib::Client client(impl_->origin);
  const auto timeout =
      std::chrono::milliseconds(static_cast<long>(config_.request_timeout_s * 1000));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  impl_->in_flight.Acquire();
  httplib::Result res = client.Post(impl_->path, headers, body, "application/json");
  impl_->in_flight.Release();

  if (!res) {
    *http_status = 0;
    return httplib::to_string(res.error());
  }
  *http_status = res->status;
  *retry_after = res->get_header_value("Retry-After");
  return res->body;
}

std::string LlmGateway::Complete(const ChatRequest& req) {
  if (req.messages.empty()) {
    throw std::invalid_argument("chat request has no messages");
  }
  if (req.temperature < 0.0) {
    throw std::invalid_argument("chat request has negative temperature");
  }
  if (config_.offline) {
    throw GatewayError(GatewayError::Kind::kOfflineMiss, 0,
                       "network use disabled and no cached response for request");
  }
  const std::string body = RequestBodyJson(req).dump();

  int backoff_ms = std::max(config_.initial_backoff_ms, 1);
  std::string last_error = "no attempt made";
  int last_status = 0;
  for (int attempt = 0; attempt <= config_.retry_limit; ++attempt) {
    if (attempt > 0) {
      impl_->retries.fetch_add(1);
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms = std::min(backoff_ms * 2, 5000);
    }
    int status = 0;
    std::string retry_after;
    const std::string response = PostOnce(body, &status, &retry_after);

    if (status == 0) {  // transport failure
      last_error = "transport error: " + response;
      last_status = 0;
      continue;
    }
    if (status == 401 || status == 403) {
      throw GatewayError(GatewayError::Kind::kAuth, status,
                         HttpErrorDetail(status, response));
    }
    if (IsRetryableStatus(status)) {
      last_error = HttpErrorDetail(status, response);
      last_status = status;
      if (status == 429 && !retry_after.empty()) {
        const double hinted = std::atof(retry_after.c_str());
        backoff_ms = std::clamp(static_cast<int>(hinted * 1000.0), 1, 30000);
      }
      continue;
    }
    if (status != 200) {
      throw GatewayError(GatewayError::Kind::kHttp, status,
                         HttpErrorDetail(status, response));
    }

    const json parsed = json::parse(response, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") ||
        !parsed["choices"].is_array() || parsed["choices"].empty()) {
      throw GatewayError(GatewayError::Kind::kMalformed, status,
                         "response has no choices array");
    }
    const json& first = parsed["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string()) {
      throw GatewayError(GatewayError::Kind::kMalformed, status,
                         "response choice has no message content");
    }
    return first["message"]["content"].get<std::string>();
  }
  throw GatewayError(last_status == 0 ? GatewayError::Kind::kTransport
                                      : GatewayError::Kind::kHttp,
                     last_status,
                     last_error + " (after " +
                         std::to_string(config_.retry_limit) + " retries)");
}

std::pair<std::string, bool> LlmGateway::CachedComplete(const ChatRequest& req) {
  if (config_.cache_dir.empty()) {
    return {Complete(req), false};
  }
  const std::string key = RequestCacheKey(req, config_.endpoint_url);
  const std::filesystem::path path =
      std::filesystem::path(config_.cache_dir) / (key + ".json");

  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    const json entry = json::parse(ReadFile(path.string()), nullptr, false);
    if (entry.is_object() && entry.value("key", "") == key &&
        entry.contains("response_text") && entry["response_text"].is_string()) {
      impl_->cache_hits.fetch_add(1);
      return {entry["response_text"].get<std::string>(), true};
    }
    // Corrupt entry: fall through and refetch, then overwrite.
  }

  impl_->cache_misses.fetch_add(1);
  if (config_.offline) {
    throw GatewayError(GatewayError::Kind::kOfflineMiss, 0,
                       "offline cache miss for key " + key);
  }
  const std::string text = Complete(req);
  ordered_json entry;
  entry["key"] = key;
  entry["endpoint"] = config_.endpoint_url;
  entry["created_at"] = static_cast<int64_t>(std::time(nullptr));
  entry["response_text"] = text;
  WriteFileAtomic(path.string(), entry.dump(2) + "\n");
  return {text, false};
}

}  // namespace ieforge
