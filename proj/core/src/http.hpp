#pragma once

// Minimal JSON-over-HTTPS POST with retry on rate limiting, shared by the
// repository-pool and generation clients.

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace callwitness::http {

struct RetryPolicy {
    int attempts = 4;
    std::chrono::milliseconds initial_backoff{500};
};

struct Response {
    int status = 0;
    std::string body;
};

/// POSTs `body` to base_url + path. Statuses 429 and 403-with-rate-limit are
/// retried with exponential backoff, then surface as Error{rate_limited}.
/// 401 raises Error{auth_error}; transport failures raise Error{network_error}.
/// Other statuses are returned to the caller.
Response post_json(const std::string& base_url, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& headers, const std::string& body,
                   double timeout_s, const RetryPolicy& retry = {});

}  // namespace callwitness::http
