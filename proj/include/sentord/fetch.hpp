#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sentord/corpus.hpp"

namespace sentord {

struct FetchPage {
    int status = 0;
    std::string body;
};

/// Transport hook: returns one page of Atom XML, or nullopt on failure.
/// Tests inject a canned fetcher; the default performs real HTTP requests.
using PageFetcher = std::function<std::optional<FetchPage>(const std::string& url)>;

struct FetchOptions {
    std::string category = "cs";
    std::size_t max_records = 100;
    std::string endpoint = "http://export.arxiv.org/api/query";
    std::size_t page_size = 100;
    double page_pause_seconds = 3.0;  // polite delay between pages
    std::size_t max_retries = 3;
    double backoff_seconds = 1.0;  // doubled after each failed attempt
    std::string cursor_path;       // persisted resume offset; empty disables
    PageFetcher fetcher;
    std::function<void(const std::string&)> log;  // skipped-record notes
};

/// Paged harvest of abstracts from an arXiv-style Atom feed. Resumes from the
/// cursor file when present; malformed entries are skipped and logged.
std::vector<RawRecord> fetch_arxiv(const FetchOptions& opts);

/// Exposed for tests: pulls the entries out of one Atom page. Malformed
/// entries are reported through `log` and dropped.
std::vector<RawRecord> parse_atom_page(const std::string& body, const std::string& fallback_category,
                                       const std::function<void(const std::string&)>& log);

std::string unescape_xml(const std::string& s);

}  // namespace sentord
