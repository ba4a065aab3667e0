#include "http.hpp"

#include "callwitness/error.hpp"

#include <httplib.h>

#include <thread>

namespace callwitness::http {

namespace {

bool rate_limited(const httplib::Result& res) {
    if (res->status == 429) return true;
    if (res->status != 403) return false;
    return res->get_header_value("x-ratelimit-remaining") == "0" || res->body.find("rate limit") != std::string::npos;
}

}  // namespace

Response post_json(const std::string& base_url, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& headers, const std::string& body,
                   double timeout_s, const RetryPolicy& retry) {
    httplib::Client client(base_url);
    const auto seconds = static_cast<time_t>(timeout_s);
    client.set_connection_timeout(seconds, 0);
    client.set_read_timeout(seconds, 0);
    client.set_write_timeout(seconds, 0);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    auto backoff = retry.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        auto res = client.Post(path, h, body, "application/json");
        if (!res) {
            throw Error(ErrorCode::network_error, base_url + path + ": " + httplib::to_string(res.error()));
        }
        if (res->status == 401) throw Error(ErrorCode::auth_error, base_url + path + " rejected the credentials");
        if (!rate_limited(res)) return {res->status, res->body};
        if (attempt >= retry.attempts) {
            throw Error(ErrorCode::rate_limited,
                        base_url + path + " still rate limited after " + std::to_string(attempt) + " attempts");
        }
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
    }
}

}  // namespace callwitness::http
