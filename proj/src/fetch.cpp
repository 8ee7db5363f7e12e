#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "sentord/fetch.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include "sentord/errors.hpp"

namespace sentord {

namespace {

// Content of <tag ...>...</tag>, tolerating attributes on the open tag.
std::optional<std::string> tag_content(const std::string& s, const std::string& tag,
                                       std::size_t from = 0) {
    const std::string open = "<" + tag;
    std::size_t a = s.find(open, from);
    while (a != std::string::npos) {
        const char after = a + open.size() < s.size() ? s[a + open.size()] : '\0';
        if (after == '>' || after == ' ' || after == '\t' || after == '\n' || after == '\r') break;
        a = s.find(open, a + open.size());
    }
    if (a == std::string::npos) return std::nullopt;
    const std::size_t gt = s.find('>', a);
    if (gt == std::string::npos) return std::nullopt;
    const std::string close = "</" + tag + ">";
    const std::size_t b = s.find(close, gt + 1);
    if (b == std::string::npos) return std::nullopt;
    return s.substr(gt + 1, b - gt - 1);
}

std::optional<std::string> attr_value(const std::string& s, const std::string& tag,
                                      const std::string& attr) {
    const std::size_t a = s.find("<" + tag);
    if (a == std::string::npos) return std::nullopt;
    const std::size_t gt = s.find('>', a);
    if (gt == std::string::npos) return std::nullopt;
    const std::string probe = attr + "=\"";
    const std::size_t v = s.find(probe, a);
    if (v == std::string::npos || v > gt) return std::nullopt;
    const std::size_t end = s.find('"', v + probe.size());
    if (end == std::string::npos) return std::nullopt;
    return s.substr(v + probe.size(), end - v - probe.size());
}

std::string squeeze_whitespace(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // drops leading whitespace
    for (char c : s) {
        const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (ws) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

void note(const std::function<void(const std::string&)>& log, const std::string& msg) {
    if (log) log(msg);
}

PageFetcher default_fetcher(const std::string& endpoint) {
    // endpoint = scheme://host/path
    const std::size_t scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw DataError("endpoint must include a scheme");
    const std::size_t host_start = scheme_end + 3;
    const std::size_t path_start = endpoint.find('/', host_start);
    const std::string origin =
        path_start == std::string::npos ? endpoint : endpoint.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
    return [origin, path](const std::string& query) -> std::optional<FetchPage> {
        httplib::Client client(origin);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        auto res = client.Get(path + "?" + query);
        if (!res) return std::nullopt;
        return FetchPage{res->status, res->body};
    };
}

std::size_t read_cursor(const std::string& path) {
    if (path.empty()) return 0;
    std::ifstream f(path);
    if (!f) return 0;
    std::size_t v = 0;
    f >> v;
    return f ? v : 0;
}

void write_cursor(const std::string& path, std::size_t v) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw DataError("cannot write cursor file " + path);
    f << v << '\n';
}

}  // namespace

std::string unescape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const std::size_t semi = s.find(';', i);
        if (semi == std::string::npos || semi - i > 8) {
            out.push_back(s[i++]);
            continue;
        }
        const std::string ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos" || ent == "#39") out.push_back('\'');
        else {
            out.push_back(s[i++]);
            continue;
        }
        i = semi + 1;
    }
    return out;
}

std::vector<RawRecord> parse_atom_page(const std::string& body,
                                       const std::string& fallback_category,
                                       const std::function<void(const std::string&)>& log) {
    std::vector<RawRecord> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t a = body.find("<entry", pos);
        if (a == std::string::npos) break;
        const std::size_t gt = body.find('>', a);
        const std::size_t b = body.find("</entry>", a);
        if (gt == std::string::npos || b == std::string::npos || gt > b) {
            note(log, "skipped malformed trailing entry");
            break;
        }
        const std::string entry_str = body.substr(gt + 1, b - gt - 1);
        const std::string* entry = &entry_str;
        pos = b + 8;
        RawRecord r;
        auto id = tag_content(*entry, "id");
        if (id) {
            std::string v = squeeze_whitespace(*id);
            const std::size_t abs = v.rfind("/abs/");
            r.id = abs == std::string::npos ? v : v.substr(abs + 5);
        }
        auto summary = tag_content(*entry, "summary");
        if (!summary || squeeze_whitespace(*summary).empty()) {
            note(log, "skipped entry " + (r.id.empty() ? "<no id>" : r.id) + ": missing summary");
            continue;
        }
        if (r.id.empty()) {
            note(log, "skipped entry: missing id");
            continue;
        }
        r.abstract = unescape_xml(squeeze_whitespace(*summary));
        auto cat = attr_value(*entry, "arxiv:primary_category", "term");
        if (!cat) cat = attr_value(*entry, "category", "term");
        r.category = cat ? unescape_xml(*cat) : fallback_category;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RawRecord> fetch_arxiv(const FetchOptions& opts) {
    std::vector<RawRecord> out;
    if (opts.max_records == 0) return out;
    if (opts.page_size == 0) throw DataError("page_size must be positive");

    PageFetcher fetch = opts.fetcher ? opts.fetcher : default_fetcher(opts.endpoint);
    std::size_t start = read_cursor(opts.cursor_path);
    bool first_page = true;

    while (out.size() < opts.max_records) {
        const std::size_t want = std::min(opts.page_size, opts.max_records - out.size());
        if (!first_page && opts.page_pause_seconds > 0.0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(opts.page_pause_seconds));
        }
        first_page = false;

        const std::string query = "search_query=cat:" + opts.category +
                                  "*&start=" + std::to_string(start) +
                                  "&max_results=" + std::to_string(want);

        std::optional<FetchPage> page;
        double pause = opts.backoff_seconds;
        for (std::size_t attempt = 0;; ++attempt) {
            page = fetch(query);
            if (page && page->status == 200) break;
            if (attempt >= opts.max_retries) {
                const std::string why = page ? "HTTP " + std::to_string(page->status)
                                             : "transport failure";
                throw RetryableFetchError("page fetch failed after " +
                                          std::to_string(opts.max_retries + 1) + " attempts (" +
                                          why + ")");
            }
            if (pause > 0.0) {
                std::this_thread::sleep_for(std::chrono::duration<double>(pause));
            }
            pause *= 2.0;
        }

        auto records = parse_atom_page(page->body, opts.category, opts.log);
        const std::size_t raw_entries = [&] {
            std::size_t c = 0, p = 0;
            while ((p = page->body.find("<entry", p)) != std::string::npos) {
                ++c;
                p += 6;
            }
            return c;
        }();
        for (auto& r : records) {
            if (out.size() >= opts.max_records) break;
            out.push_back(std::move(r));
        }
        start += raw_entries;
        write_cursor(opts.cursor_path, start);
        if (raw_entries < want) break;  // feed exhausted
    }
    return out;
}

}  // namespace sentord
