#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace callwitness {

class GenerationClient {
public:
    virtual ~GenerationClient() = default;
    /// Throws Error{client_error} (or an infrastructure error) on failure.
    virtual std::string complete(const std::string& prompt) = 0;
};

/// Canned responses keyed by the SHA-256 of the prompt.
class MockGenerationClient : public GenerationClient {
public:
    MockGenerationClient() = default;
    /// JSON object {"<sha256 of prompt>": "<response>", ...}.
    static MockGenerationClient from_file(const std::filesystem::path& path);

    void add_response(const std::string& prompt, std::string response);
    void add_response_for_hash(std::string prompt_sha256, std::string response);

    /// Throws Error{client_error} for an unknown prompt.
    std::string complete(const std::string& prompt) override;

    std::string serialize() const;
    size_t size() const noexcept { return responses_.size(); }

private:
    std::map<std::string, std::string> responses_;
};

/// Chat-completions adapter for OpenAI-compatible endpoints. The bearer token
/// comes from CALLWITNESS_API_TOKEN; its absence raises Error{auth_error}.
class ChatCompletionsClient : public GenerationClient {
public:
    ChatCompletionsClient(std::string base_url, std::string model, std::uint64_t seed = 0, double timeout_s = 120.0);

    std::string complete(const std::string& prompt) override;

private:
    std::string base_url_;
    std::string model_;
    std::uint64_t seed_;
    double timeout_s_;
    std::string token_;
};

}  // namespace callwitness
