#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sentord/corpus.hpp"
#include "sentord/errors.hpp"

using namespace sentord;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p, const std::string& content) : path(std::move(p)) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("make_document splits, tokenizes and keeps presentation order as gold") {
    const auto doc = make_document("d1", "cs", "A cat sat. A dog ran. Both left.");
    CHECK(doc.size() == 3);
    CHECK(doc.sentences[0].tokens == std::vector<std::string>{"a", "cat", "sat", "."});
    CHECK(doc.gold.empty());
    CHECK(doc.gold_arrangement() == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(make_document("d2", "cs", "   "), EmptyText);
}

TEST_CASE("long sentences truncate to the token cap") {
    std::string text;
    for (int i = 0; i < 200; ++i) text += "word ";
    text += "end.";
    const auto doc = make_document("d", "cs", text);
    REQUIRE(doc.size() == 1);
    CHECK(doc.sentences[0].tokens.size() == kMaxSentenceTokens);
}

TEST_CASE("pair extraction emits ordered positives then mirrored negatives") {
    Document doc;
    doc.id = "d";
    doc.sentences.resize(3);
    const auto pairs = extract_pair_examples(doc, 7);
    REQUIRE(pairs.size() == 6);
    // positives: every (i, j) with i before j in gold order
    CHECK(pairs[0].first == 0);
    CHECK(pairs[0].second == 1);
    CHECK(pairs[0].label == 1);
    CHECK(pairs[1].first == 0);
    CHECK(pairs[1].second == 2);
    CHECK(pairs[2].first == 1);
    CHECK(pairs[2].second == 2);
    // negatives mirror the positives in the same order
    CHECK(pairs[3].first == 1);
    CHECK(pairs[3].second == 0);
    CHECK(pairs[3].label == 0);
    CHECK(pairs[4].first == 2);
    CHECK(pairs[4].second == 0);
    CHECK(pairs[5].first == 2);
    CHECK(pairs[5].second == 1);
    for (const auto& p : pairs) CHECK(p.doc == 7);
}

TEST_CASE("explicit gold order drives the pair labels") {
    Document doc;
    doc.sentences.resize(3);
    doc.gold = {2, 0, 1};  // presented sentence 2 reads first
    const auto pairs = extract_pair_examples(doc, 0);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].first == 2);
    CHECK(pairs[0].second == 0);
    CHECK(pairs[0].label == 1);
    CHECK(pairs[3].first == 0);
    CHECK(pairs[3].second == 2);
    CHECK(pairs[3].label == 0);
}

TEST_CASE("adjacent-only extraction keeps neighbouring pairs") {
    Document doc;
    doc.sentences.resize(4);
    const auto pairs = extract_pair_examples(doc, 0, true);
    REQUIRE(pairs.size() == 6);  // 3 adjacent positives + mirrors
    CHECK(pairs[0].first == 0);
    CHECK(pairs[0].second == 1);
    CHECK(pairs[1].first == 1);
    CHECK(pairs[1].second == 2);
    CHECK(pairs[2].first == 2);
    CHECK(pairs[2].second == 3);
}

TEST_CASE("dataset split partitions without loss and is seed-stable") {
    std::vector<Document> docs(20);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        docs[i].id = "d" + std::to_string(i);
        docs[i].sentences.resize(2);
    }
    const auto s1 = split_dataset(docs, 0.2, 0.1, 5);
    CHECK(s1.dev.size() == 4);
    CHECK(s1.test.size() == 2);
    CHECK(s1.train.size() == 14);

    const auto s2 = split_dataset(docs, 0.2, 0.1, 5);
    for (std::size_t i = 0; i < s1.train.size(); ++i) CHECK(s1.train[i].id == s2.train[i].id);

    std::vector<std::string> all;
    for (const auto& d : s1.train) all.push_back(d.id);
    for (const auto& d : s1.dev) all.push_back(d.id);
    for (const auto& d : s1.test) all.push_back(d.id);
    std::sort(all.begin(), all.end());
    CHECK(std::unique(all.begin(), all.end()) == all.end());
    CHECK(all.size() == docs.size());

    CHECK_THROWS_AS(split_dataset(std::vector<Document>(5), 0.1, 0.1, 1), TooSmall);
    CHECK_THROWS_AS(split_dataset(docs, 0.6, 0.5, 1), TooSmall);
}

TEST_CASE("raw input auto-detects JSONL and plain text") {
    TempFile jsonl("raw_a.jsonl",
                   R"({"id":"x1","category":"math","abstract":"One. Two."})"
                   "\n"
                   R"({"id":"x2","abstract":"Three."})"
                   "\n");
    const auto a = read_raw(jsonl.path);
    REQUIRE(a.size() == 2);
    CHECK(a[0].id == "x1");
    CHECK(a[0].category == "math");
    CHECK(a[1].category == "unknown");

    TempFile plain("raw_b.txt", "First text. More of it.\nSecond text here.\n");
    const auto b = read_raw(plain.path);
    REQUIRE(b.size() == 2);
    CHECK(b[0].abstract == "First text. More of it.");
    CHECK(b[1].id == "2");
}

TEST_CASE("prepared documents round-trip") {
    std::vector<Document> docs;
    docs.push_back(make_document("p1", "stat", "A cat sat. A dog ran."));
    docs.push_back(make_document("p2", "cs", "Only one here."));
    docs[0].gold = {1, 0};
    const std::string path = "prepared_rt.jsonl";
    write_prepared_jsonl(path, docs);
    const auto back = read_documents_jsonl(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "p1");
    CHECK(back[0].category == "stat");
    CHECK(back[0].sentences[1].raw == docs[0].sentences[1].raw);
    CHECK(back[0].gold == std::vector<int>{1, 0});
    CHECK(back[1].gold.empty());
    std::remove(path.c_str());
}

TEST_CASE("gold order in files must be a permutation") {
    TempFile bad("prepared_bad.jsonl",
                 R"({"id":"b","sentences":["A.","B."],"gold_order":[1,1]})"
                 "\n");
    CHECK_THROWS_AS(read_documents_jsonl(bad.path), InvalidOrder);
}

TEST_CASE("prediction records convert between 0-based and 1-based") {
    PredictionRecord rec;
    rec.id = "t";
    rec.gold_order = {2, 0, 1};
    rec.predicted_order = {0, 1, 2};
    rec.score = -1.5;
    const std::string path = "pred_rt.jsonl";
    write_predictions_jsonl(path, {rec});
    {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line.find("[3,1,2]") != std::string::npos);  // stored 1-based
    }
    const auto back = read_predictions_jsonl(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].gold_order == rec.gold_order);
    CHECK(back[0].predicted_order == rec.predicted_order);
    CHECK(back[0].score == rec.score);
    std::remove(path.c_str());

    TempFile bad("pred_bad.jsonl",
                 R"({"id":"t","gold_order":[1,3],"predicted_order":[1,2],"score":0})"
                 "\n");
    CHECK_THROWS_AS(read_predictions_jsonl(bad.path), InvalidOrder);
}

TEST_CASE("vocabulary construction counts every token of every sentence") {
    std::vector<Document> docs;
    docs.push_back(make_document("v1", "cs", "cat cat cat dog. Dog cat."));
    const auto vocab = build_vocabulary(docs, 2);
    CHECK(vocab.id("cat") != Vocabulary::kUnk);
    CHECK(vocab.id("dog") != Vocabulary::kUnk);
    CHECK(vocab.id(".") != Vocabulary::kUnk);
    CHECK_THROWS_AS(build_vocabulary({}, 1), EmptyCorpus);

    auto encoded = docs;
    encode_corpus(encoded, vocab);
    CHECK(encoded[0].sentences[0].ids.size() == 5);
    CHECK(encoded[0].sentences[0].ids[0] == vocab.id("cat"));
}
