#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sentord/errors.hpp"
#include "sentord/fetch.hpp"

using namespace sentord;

namespace {

std::string entry(const std::string& id, const std::string& summary,
                  const std::string& cat = "cs.CL") {
    return "<entry><id>http://arxiv.org/abs/" + id + "</id><summary>" + summary +
           "</summary><arxiv:primary_category term=\"" + cat + "\"/></entry>";
}

std::string feed(const std::vector<std::string>& entries) {
    std::string body = "<?xml version=\"1.0\"?><feed>";
    for (const auto& e : entries) body += e;
    return body + "</feed>";
}

FetchOptions quiet_options() {
    FetchOptions o;
    o.page_pause_seconds = 0.0;
    o.backoff_seconds = 0.0;
    return o;
}

}  // namespace

TEST_CASE("atom entries parse into records") {
    std::vector<std::string> notes;
    const auto recs = parse_atom_page(
        feed({entry("1001.1", "An abstract with  \n spread   whitespace."),
              entry("1001.2", "Math &amp; physics &lt;united&gt;.", "math.CO")}),
        "cs", [&](const std::string& m) { notes.push_back(m); });
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].id == "1001.1");
    CHECK(recs[0].abstract == "An abstract with spread whitespace.");
    CHECK(recs[0].category == "cs.CL");
    CHECK(recs[1].abstract == "Math & physics <united>.");
    CHECK(recs[1].category == "math.CO");
    CHECK(notes.empty());
}

TEST_CASE("malformed entries are skipped and noted") {
    std::vector<std::string> notes;
    const auto recs = parse_atom_page(
        feed({entry("ok.1", "Fine."),
              "<entry><id>http://arxiv.org/abs/no-summary</id></entry>",
              "<entry><summary>No id here.</summary></entry>",
              entry("ok.2", "Also fine.")}),
        "cs", [&](const std::string& m) { notes.push_back(m); });
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].id == "ok.1");
    CHECK(recs[1].id == "ok.2");
    CHECK(notes.size() == 2);
}

TEST_CASE("paged harvest assembles records across requests") {
    std::vector<std::string> queries;
    FetchOptions o = quiet_options();
    o.max_records = 5;
    o.page_size = 3;
    o.fetcher = [&](const std::string& q) -> std::optional<FetchPage> {
        queries.push_back(q);
        if (queries.size() == 1)
            return FetchPage{200, feed({entry("a", "One."), entry("b", "Two."),
                                        entry("c", "Three.")})};
        return FetchPage{200, feed({entry("d", "Four."), entry("e", "Five.")})};
    };
    const auto recs = fetch_arxiv(o);
    REQUIRE(recs.size() == 5);
    CHECK(recs[0].id == "a");
    CHECK(recs[4].id == "e");
    REQUIRE(queries.size() == 2);
    CHECK(queries[0] == "search_query=cat:cs*&start=0&max_results=3");
    CHECK(queries[1] == "search_query=cat:cs*&start=3&max_results=2");
}

TEST_CASE("zero records means zero requests") {
    FetchOptions o = quiet_options();
    o.max_records = 0;
    o.fetcher = [&](const std::string&) -> std::optional<FetchPage> {
        FAIL("no request expected");
        return std::nullopt;
    };
    CHECK(fetch_arxiv(o).empty());
}

TEST_CASE("a short page ends the harvest early") {
    std::size_t calls = 0;
    FetchOptions o = quiet_options();
    o.max_records = 100;
    o.page_size = 10;
    o.fetcher = [&](const std::string&) -> std::optional<FetchPage> {
        ++calls;
        return FetchPage{200, feed({entry("only", "Lone record.")})};
    };
    const auto recs = fetch_arxiv(o);
    CHECK(recs.size() == 1);
    CHECK(calls == 1);
}

TEST_CASE("cursor file resumes where the last run stopped") {
    const std::string cursor = "fetch_cursor_test.txt";
    std::remove(cursor.c_str());
    std::vector<std::string> queries;
    FetchOptions o = quiet_options();
    o.max_records = 2;
    o.page_size = 2;
    o.cursor_path = cursor;
    o.fetcher = [&](const std::string& q) -> std::optional<FetchPage> {
        queries.push_back(q);
        return FetchPage{200, feed({entry("r" + std::to_string(queries.size() * 10), "A."),
                                    entry("r" + std::to_string(queries.size() * 10 + 1), "B.")})};
    };
    const auto first = fetch_arxiv(o);
    const auto second = fetch_arxiv(o);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].find("start=0") != std::string::npos);
    CHECK(queries[1].find("start=2") != std::string::npos);
    CHECK(first[0].id != second[0].id);  // no duplicates across resumed runs
    std::remove(cursor.c_str());
}

TEST_CASE("skipped entries still advance the cursor") {
    const std::string cursor = "fetch_cursor_skip.txt";
    std::remove(cursor.c_str());
    FetchOptions o = quiet_options();
    o.max_records = 1;
    o.page_size = 2;
    o.cursor_path = cursor;
    o.fetcher = [&](const std::string&) -> std::optional<FetchPage> {
        return FetchPage{200,
                         feed({"<entry><id>http://arxiv.org/abs/bad</id></entry>",
                               entry("good", "Kept.")})};
    };
    const auto recs = fetch_arxiv(o);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].id == "good");
    std::ifstream in(cursor);
    std::size_t v = 0;
    in >> v;
    CHECK(v == 2);  // both raw entries counted, even the skipped one
    std::remove(cursor.c_str());
}

TEST_CASE("persistent failures raise a retryable error") {
    std::size_t calls = 0;
    FetchOptions o = quiet_options();
    o.max_records = 1;
    o.max_retries = 2;
    o.fetcher = [&](const std::string&) -> std::optional<FetchPage> {
        ++calls;
        return FetchPage{503, "overloaded"};
    };
    CHECK_THROWS_AS(fetch_arxiv(o), RetryableFetchError);
    CHECK(calls == 3);  // first try plus two retries
}

TEST_CASE("a failing page recovers on retry") {
    std::size_t calls = 0;
    FetchOptions o = quiet_options();
    o.max_records = 1;
    o.page_size = 1;
    o.fetcher = [&](const std::string&) -> std::optional<FetchPage> {
        ++calls;
        if (calls == 1) return std::nullopt;
        return FetchPage{200, feed({entry("late", "Worth the wait.")})};
    };
    const auto recs = fetch_arxiv(o);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].id == "late");
    CHECK(calls == 2);
}

TEST_CASE("xml entities unescape") {
    CHECK(unescape_xml("a &amp; b &lt;c&gt; &quot;d&quot; &apos;e&apos;") ==
          "a & b <c> \"d\" 'e'");
    CHECK(unescape_xml("unterminated &am") == "unterminated &am");
    CHECK(unescape_xml("unknown &nbsp; entity") == "unknown &nbsp; entity");
}
