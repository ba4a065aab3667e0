#pragma once

#include "callwitness/schema.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

struct RepoRecord {
    std::string slug;  // owner/name
    int stars = 0;
    std::string license;  // SPDX id
    Language language = Language::python;

    bool operator==(const RepoRecord&) const = default;
};

struct RepoCriteria {
    int min_stars = 50;
    std::set<std::string> licenses{"MIT", "Apache-2.0", "BSD-2-Clause", "BSD-3-Clause", "ISC"};
    /// Languages to query; all three when empty.
    std::vector<Language> languages;
    /// Upper bound on records retrieved per language, across pages.
    int max_per_language = 1000;
};

bool admits(const RepoCriteria& criteria, const RepoRecord& record);

struct RepoPage {
    std::vector<RepoRecord> records;
    /// Empty when this was the last page.
    std::string next_cursor;
};

class RepoApiClient {
public:
    virtual ~RepoApiClient() = default;
    /// One page of search results for `language`; cursor "" is the first page.
    virtual RepoPage fetch_page(const RepoCriteria& criteria, Language language, const std::string& cursor) = 0;
};

/// Serves records from a JSON array of {slug, stars, license, language}.
class FixtureRepoClient : public RepoApiClient {
public:
    explicit FixtureRepoClient(std::vector<RepoRecord> records, size_t page_size = 2);
    static FixtureRepoClient from_file(const std::filesystem::path& path, size_t page_size = 2);

    RepoPage fetch_page(const RepoCriteria& criteria, Language language, const std::string& cursor) override;

private:
    std::vector<RepoRecord> records_;
    size_t page_size_;
};

/// GitHub GraphQL search. The token is read from GITHUB_TOKEN at
/// construction; its absence raises Error{auth_error}.
class GitHubGraphQLClient : public RepoApiClient {
public:
    explicit GitHubGraphQLClient(std::string endpoint = "https://api.github.com", double timeout_s = 30.0);

    RepoPage fetch_page(const RepoCriteria& criteria, Language language, const std::string& cursor) override;

    /// The search string sent for one language.
    static std::string search_query(const RepoCriteria& criteria, Language language);

private:
    std::string endpoint_;
    std::string token_;
    double timeout_s_;
};

/// Pages through every requested language, keeps admitted records, drops
/// duplicate slugs and returns them sorted by slug.
std::vector<RepoRecord> query_repo_pool(RepoApiClient& client, const RepoCriteria& criteria);

std::string serialize_repo_records(const std::vector<RepoRecord>& records);
/// Throws Error{schema_violation}.
std::vector<RepoRecord> deserialize_repo_records(std::string_view data);

}  // namespace callwitness
