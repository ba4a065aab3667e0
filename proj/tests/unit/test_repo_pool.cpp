#include <doctest.h>

#include "test_support.hpp"

#include <callwitness/generation_client.hpp>
#include <callwitness/digest.hpp>
#include <callwitness/process.hpp>
#include <callwitness/repo_pool.hpp>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace callwitness;

namespace {

// Local HTTP stand-in for the remote APIs.
class LocalServer {
public:
    LocalServer() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    httplib::Server& server() { return server_; }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) ::setenv(name, value, 1);
        else ::unsetenv(name);
    }
    ~ScopedEnv() {
        if (old_) ::setenv(name_, old_->c_str(), 1);
        else ::unsetenv(name_);
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

nlohmann::json repo_node(const std::string& slug, int stars, const char* license, const char* language) {
    nlohmann::json n;
    n["nameWithOwner"] = slug;
    n["stargazerCount"] = stars;
    n["licenseInfo"] = license ? nlohmann::json{{"spdxId", license}} : nlohmann::json(nullptr);
    n["primaryLanguage"] = {{"name", language}};
    return n;
}

std::vector<RepoRecord> sample_records() {
    return {
        {"b/two", 60, "MIT", Language::python},
        {"a/one", 500, "Apache-2.0", Language::python},
        {"c/low", 49, "MIT", Language::python},
        {"d/gpl", 900, "GPL-3.0", Language::javascript},
        {"e/js", 50, "ISC", Language::javascript},
        {"f/java", 1000, "BSD-3-Clause", Language::java},
        {"a/one", 500, "Apache-2.0", Language::python},
    };
}

}  // namespace

TEST_CASE("criteria") {
    const RepoCriteria c;
    CHECK(admits(c, {"o/r", 50, "MIT", Language::python}));
    CHECK_FALSE(admits(c, {"o/r", 49, "MIT", Language::python}));
    CHECK_FALSE(admits(c, {"o/r", 5000, "GPL-3.0", Language::python}));
    CHECK_FALSE(admits(c, {"o/r", 5000, "", Language::python}));
    CHECK(GitHubGraphQLClient::search_query(c, Language::javascript) ==
          "language:JavaScript stars:>=50 fork:false archived:false");
}

TEST_CASE("pool from paged fixtures") {
    FixtureRepoClient client(sample_records(), 1);
    const auto pool = query_repo_pool(client, RepoCriteria{});
    REQUIRE(pool.size() == 4);
    CHECK(pool[0].slug == "a/one");
    CHECK(pool[1].slug == "b/two");
    CHECK(pool[2].slug == "e/js");
    CHECK(pool[3].slug == "f/java");

    RepoCriteria capped;
    capped.max_per_language = 1;
    capped.languages = {Language::python};
    const auto one = query_repo_pool(client, capped);
    REQUIRE(one.size() == 1);
    CHECK(one[0].slug == "b/two");
}

TEST_CASE("record serialization") {
    const auto records = sample_records();
    CHECK(deserialize_repo_records(serialize_repo_records(records)) == records);
    CHECK_THROWS_AS(deserialize_repo_records("{}"), Error);
    CHECK_THROWS_AS(deserialize_repo_records("[{\"slug\":\"a/b\",\"stars\":-1,\"language\":\"java\"}]"), Error);
    CHECK_THROWS_AS(deserialize_repo_records("[{\"slug\":\"a/b\",\"stars\":1,\"language\":\"go\"}]"), Error);

    const auto dir = cwtest::fresh_dir("repo-records");
    write_file(dir / "repos.json", serialize_repo_records(records));
    auto client = FixtureRepoClient::from_file(dir / "repos.json");
    CHECK(query_repo_pool(client, RepoCriteria{}).size() == 4);
}

TEST_CASE("GitHub client needs a token") {
    ScopedEnv env("GITHUB_TOKEN", nullptr);
    try {
        GitHubGraphQLClient client;
        FAIL("constructed");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::auth_error);
    }
}

TEST_CASE("GitHub client pages through search results") {
    ScopedEnv env("GITHUB_TOKEN", "test-token");
    LocalServer local;
    std::atomic<int> calls{0};
    local.server().Post("/graphql", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        CHECK(req.get_header_value("Authorization") == "bearer test-token");
        const auto body = nlohmann::json::parse(req.body);
        const bool first = body["variables"]["after"].is_null();
        nlohmann::json nodes = nlohmann::json::array();
        if (first) {
            nodes.push_back(repo_node("x/alpha", 120, "MIT", "Python"));
            nodes.push_back(repo_node("x/nolicense", 400, nullptr, "Python"));
            nodes.push_back(repo_node("x/elsewhere", 400, "MIT", "Jupyter Notebook"));
        } else {
            nodes.push_back(repo_node("x/beta", 77, "BSD-2-Clause", "Python"));
        }
        const nlohmann::json out = {
            {"data",
             {{"search",
               {{"pageInfo", {{"hasNextPage", first}, {"endCursor", first ? "CUR1" : ""}}}, {"nodes", nodes}}}}}};
        res.set_content(out.dump(), "application/json");
    });

    GitHubGraphQLClient client(local.url(), 5.0);
    RepoCriteria c;
    c.languages = {Language::python};
    const auto pool = query_repo_pool(client, c);
    REQUIRE(pool.size() == 2);
    CHECK(pool[0].slug == "x/alpha");
    CHECK(pool[1].slug == "x/beta");
    CHECK(pool[1].license == "BSD-2-Clause");
    CHECK(calls == 2);
}

TEST_CASE("GitHub client error statuses") {
    ScopedEnv env("GITHUB_TOKEN", "test-token");
    LocalServer local;
    std::atomic<int> calls{0};
    local.server().Post("/graphql", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        const auto q = nlohmann::json::parse(req.body)["variables"]["q"].get<std::string>();
        if (q.find("Python") != std::string::npos) {
            res.status = 401;
        } else if (q.find("JavaScript") != std::string::npos) {
            res.status = 429;
        } else {
            res.set_content("{\"errors\":[{\"type\":\"RATE_LIMITED\"}]}", "application/json");
        }
    });
    GitHubGraphQLClient client(local.url(), 5.0);
    RepoCriteria c;
    auto code_of = [&](Language l) {
        try {
            client.fetch_page(c, l, "");
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::invalid_argument;
    };
    CHECK(code_of(Language::python) == ErrorCode::auth_error);
    calls = 0;
    CHECK(code_of(Language::javascript) == ErrorCode::rate_limited);
    CHECK(calls == 4);
    CHECK(code_of(Language::java) == ErrorCode::rate_limited);
}

TEST_CASE("unreachable endpoint is a network error") {
    ScopedEnv env("GITHUB_TOKEN", "test-token");
    GitHubGraphQLClient client("http://127.0.0.1:1", 2.0);
    try {
        client.fetch_page(RepoCriteria{}, Language::java, "");
        FAIL("fetched");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::network_error);
        CHECK(is_infrastructure(e.code()));
    }
}

TEST_CASE("mock generation client") {
    MockGenerationClient mock;
    mock.add_response("prompt one", "answer one");
    mock.add_response_for_hash(sha256_hex("prompt two"), "answer two");
    CHECK(mock.size() == 2);
    CHECK(mock.complete("prompt one") == "answer one");
    CHECK(mock.complete("prompt two") == "answer two");
    try {
        mock.complete("unknown");
        FAIL("answered");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::client_error);
    }
    const auto dir = cwtest::fresh_dir("mock-client");
    write_file(dir / "mock.json", mock.serialize());
    auto loaded = MockGenerationClient::from_file(dir / "mock.json");
    CHECK(loaded.complete("prompt two") == "answer two");
    CHECK(loaded.serialize() == mock.serialize());
}

TEST_CASE("chat-completions client") {
    {
        ScopedEnv env("CALLWITNESS_API_TOKEN", nullptr);
        CHECK_THROWS_AS(ChatCompletionsClient("http://127.0.0.1:1", "m"), Error);
    }
    ScopedEnv env("CALLWITNESS_API_TOKEN", "secret");
    LocalServer local;
    local.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        if (req.get_header_value("Authorization") != "Bearer secret") {
            res.status = 401;
            return;
        }
        if (body["messages"][0]["content"] == "break") {
            res.status = 500;
            return;
        }
        CHECK(body["model"] == "tiny");
        CHECK(body["temperature"] == 0);
        CHECK(body["seed"] == 9);
        const nlohmann::json out = {
            {"choices", {{{"message", {{"role", "assistant"}, {"content", "echo:" + body["messages"][0]["content"].get<std::string>()}}}}}}};
        res.set_content(out.dump(), "application/json");
    });
    ChatCompletionsClient client(local.url(), "tiny", 9, 5.0);
    CHECK(client.complete("hi") == "echo:hi");
    try {
        client.complete("break");
        FAIL("completed");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::client_error);
    }
}
