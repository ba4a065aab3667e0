#include "callwitness/generation_client.hpp"

#include "callwitness/digest.hpp"
#include "callwitness/error.hpp"
#include "callwitness/process.hpp"
#include "http.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>

namespace callwitness {

MockGenerationClient MockGenerationClient::from_file(const std::filesystem::path& path) {
    MockGenerationClient client;
    try {
        const auto j = nlohmann::json::parse(read_file(path));
        for (const auto& [hash, response] : j.items()) client.add_response_for_hash(hash, response.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_violation, path.string() + ": " + e.what());
    }
    return client;
}

void MockGenerationClient::add_response(const std::string& prompt, std::string response) {
    responses_[sha256_hex(prompt)] = std::move(response);
}

void MockGenerationClient::add_response_for_hash(std::string prompt_sha256, std::string response) {
    responses_[std::move(prompt_sha256)] = std::move(response);
}

std::string MockGenerationClient::complete(const std::string& prompt) {
    const std::string key = sha256_hex(prompt);
    const auto it = responses_.find(key);
    if (it == responses_.end()) throw Error(ErrorCode::client_error, "no canned response for prompt " + key);
    return it->second;
}

std::string MockGenerationClient::serialize() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : responses_) j[k] = v;
    return j.dump(2) + "\n";
}

ChatCompletionsClient::ChatCompletionsClient(std::string base_url, std::string model, std::uint64_t seed,
                                             double timeout_s)
    : base_url_(std::move(base_url)), model_(std::move(model)), seed_(seed), timeout_s_(timeout_s) {
    const char* token = std::getenv("CALLWITNESS_API_TOKEN");
    if (token == nullptr || *token == '\0') throw Error(ErrorCode::auth_error, "CALLWITNESS_API_TOKEN is not set");
    token_ = token;
}

std::string ChatCompletionsClient::complete(const std::string& prompt) {
    nlohmann::json request;
    request["model"] = model_;
    request["temperature"] = 0;
    request["seed"] = seed_;
    request["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    const auto res = http::post_json(base_url_, "/v1/chat/completions", {{"Authorization", "Bearer " + token_}},
                                     request.dump(), timeout_s_);
    if (res.status != 200) {
        throw Error(ErrorCode::client_error, "chat completion failed with HTTP " + std::to_string(res.status));
    }
    try {
        return nlohmann::json::parse(res.body).at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::client_error, std::string("unexpected completion response: ") + e.what());
    }
}

}  // namespace callwitness
