#include "callwitness/repo_pool.hpp"

#include "callwitness/process.hpp"
#include "http.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>

namespace callwitness {

namespace {

std::optional<Language> language_from_github(std::string_view name) {
    for (Language l : kAllLanguages) {
        if (display_name(l) == name) return l;
    }
    return std::nullopt;
}

}  // namespace

bool admits(const RepoCriteria& criteria, const RepoRecord& record) {
    return record.stars >= criteria.min_stars && criteria.licenses.count(record.license) != 0;
}

FixtureRepoClient::FixtureRepoClient(std::vector<RepoRecord> records, size_t page_size)
    : records_(std::move(records)), page_size_(std::max<size_t>(page_size, 1)) {}

FixtureRepoClient FixtureRepoClient::from_file(const std::filesystem::path& path, size_t page_size) {
    return FixtureRepoClient(deserialize_repo_records(read_file(path)), page_size);
}

RepoPage FixtureRepoClient::fetch_page(const RepoCriteria&, Language language, const std::string& cursor) {
    std::vector<const RepoRecord*> matching;
    for (const auto& r : records_) {
        if (r.language == language) matching.push_back(&r);
    }
    size_t start = 0;
    if (!cursor.empty()) {
        try {
            start = std::stoul(cursor);
        } catch (const std::exception&) {
            throw Error(ErrorCode::invalid_argument, "bad fixture cursor '" + cursor + "'");
        }
    }
    RepoPage page;
    const size_t end = std::min(matching.size(), start + page_size_);
    for (size_t i = start; i < end; ++i) page.records.push_back(*matching[i]);
    if (end < matching.size()) page.next_cursor = std::to_string(end);
    return page;
}

GitHubGraphQLClient::GitHubGraphQLClient(std::string endpoint, double timeout_s)
    : endpoint_(std::move(endpoint)), timeout_s_(timeout_s) {
    const char* token = std::getenv("GITHUB_TOKEN");
    if (token == nullptr || *token == '\0') throw Error(ErrorCode::auth_error, "GITHUB_TOKEN is not set");
    token_ = token;
}

std::string GitHubGraphQLClient::search_query(const RepoCriteria& criteria, Language language) {
    return "language:" + std::string(display_name(language)) + " stars:>=" + std::to_string(criteria.min_stars) +
           " fork:false archived:false";
}

RepoPage GitHubGraphQLClient::fetch_page(const RepoCriteria& criteria, Language language, const std::string& cursor) {
    static constexpr std::string_view kQuery =
        "query($q:String!,$after:String){search(query:$q,type:REPOSITORY,first:100,after:$after){"
        "pageInfo{hasNextPage endCursor}nodes{...on Repository{nameWithOwner stargazerCount "
        "licenseInfo{spdxId}primaryLanguage{name}}}}}";
    nlohmann::json vars;
    vars["q"] = search_query(criteria, language);
    vars["after"] = cursor.empty() ? nlohmann::json(nullptr) : nlohmann::json(cursor);
    const nlohmann::json request = {{"query", kQuery}, {"variables", vars}};

    const auto res = http::post_json(endpoint_, "/graphql",
                                     {{"Authorization", "bearer " + token_}, {"User-Agent", "callwitness"}},
                                     request.dump(), timeout_s_);
    if (res.status != 200) {
        throw Error(ErrorCode::network_error, "GitHub GraphQL returned HTTP " + std::to_string(res.status));
    }
    RepoPage page;
    try {
        const auto body = nlohmann::json::parse(res.body);
        if (body.contains("errors")) {
            const std::string msg = body["errors"].dump();
            if (msg.find("RATE_LIMITED") != std::string::npos) throw Error(ErrorCode::rate_limited, msg);
            throw Error(ErrorCode::network_error, "GitHub GraphQL error: " + msg);
        }
        const auto& search = body.at("data").at("search");
        for (const auto& node : search.at("nodes")) {
            if (!node.contains("nameWithOwner")) continue;
            RepoRecord r;
            r.slug = node.at("nameWithOwner").get<std::string>();
            r.stars = node.at("stargazerCount").get<int>();
            if (node.contains("licenseInfo") && node["licenseInfo"].is_object()) {
                r.license = node["licenseInfo"].value("spdxId", "");
            }
            std::optional<Language> lang;
            if (node.contains("primaryLanguage") && node["primaryLanguage"].is_object()) {
                lang = language_from_github(node["primaryLanguage"].value("name", ""));
            }
            if (lang != language) continue;
            r.language = language;
            page.records.push_back(std::move(r));
        }
        const auto& info = search.at("pageInfo");
        if (info.at("hasNextPage").get<bool>()) page.next_cursor = info.at("endCursor").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::network_error, std::string("unexpected GitHub response: ") + e.what());
    }
    return page;
}

std::vector<RepoRecord> query_repo_pool(RepoApiClient& client, const RepoCriteria& criteria) {
    std::vector<Language> languages = criteria.languages;
    if (languages.empty()) languages.assign(std::begin(kAllLanguages), std::end(kAllLanguages));

    std::map<std::string, RepoRecord> by_slug;
    for (Language lang : languages) {
        int seen = 0;
        std::string cursor;
        do {
            RepoPage page = client.fetch_page(criteria, lang, cursor);
            for (auto& r : page.records) {
                if (seen >= criteria.max_per_language) break;
                ++seen;
                if (admits(criteria, r)) by_slug.emplace(r.slug, std::move(r));
            }
            cursor = std::move(page.next_cursor);
        } while (!cursor.empty() && seen < criteria.max_per_language);
    }
    std::vector<RepoRecord> out;
    out.reserve(by_slug.size());
    for (auto& [slug, r] : by_slug) out.push_back(std::move(r));
    return out;
}

std::string serialize_repo_records(const std::vector<RepoRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["slug"] = r.slug;
        j["stars"] = r.stars;
        j["license"] = r.license;
        j["language"] = to_string(r.language);
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<RepoRecord> deserialize_repo_records(std::string_view data) {
    std::vector<RepoRecord> out;
    try {
        const auto arr = nlohmann::json::parse(data);
        if (!arr.is_array()) throw Error(ErrorCode::schema_violation, "repo list must be a JSON array");
        for (const auto& j : arr) {
            RepoRecord r;
            r.slug = j.at("slug").get<std::string>();
            r.stars = j.at("stars").get<int>();
            r.license = j.value("license", "");
            r.language = parse_language(j.at("language").get<std::string>());
            if (r.slug.empty() || r.stars < 0) throw Error(ErrorCode::schema_violation, "bad repo record");
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_violation, std::string("repo list: ") + e.what());
    }
    return out;
}

}  // namespace callwitness
