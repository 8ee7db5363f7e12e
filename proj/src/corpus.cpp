#include "sentord/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "json.hpp"
#include "sentord/errors.hpp"
#include "sentord/text.hpp"

using nlohmann::json;

namespace sentord {

std::vector<int> Document::gold_arrangement() const {
    if (!gold.empty()) return gold;
    std::vector<int> identity(sentences.size());
    std::iota(identity.begin(), identity.end(), 0);
    return identity;
}

bool is_permutation_0n(const std::vector<int>& order, std::size_t n) {
    if (order.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

namespace {

Sentence make_sentence(std::string raw) {
    Sentence s;
    s.tokens = tokenize(raw);
    if (s.tokens.size() > kMaxSentenceTokens) s.tokens.resize(kMaxSentenceTokens);
    s.raw = std::move(raw);
    return s;
}

}  // namespace

Document make_document(std::string id, std::string category, const std::string& text) {
    Document d;
    d.id = std::move(id);
    d.category = std::move(category);
    for (auto& piece : split_sentences(text)) {
        Sentence s = make_sentence(std::move(piece));
        if (!s.tokens.empty()) d.sentences.push_back(std::move(s));
    }
    if (d.sentences.empty()) throw EmptyText();
    return d;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, std::size_t min_freq) {
    if (docs.empty()) throw EmptyCorpus();
    std::map<std::string, std::uint64_t> counts;
    for (const auto& d : docs)
        for (const auto& s : d.sentences)
            for (const auto& t : s.tokens) ++counts[t];
    return Vocabulary::from_counts(counts, min_freq);
}

void encode_corpus(std::vector<Document>& docs, const Vocabulary& vocab) {
    for (auto& d : docs)
        for (auto& s : d.sentences) s.ids = vocab.encode(s.tokens);
}

std::vector<PairExample> extract_pair_examples(const Document& doc, int doc_index,
                                               bool adjacent_only) {
    std::vector<PairExample> out;
    const std::vector<int> g = doc.gold_arrangement();
    const std::size_t n = g.size();
    if (n < 2) return out;
    auto emit = [&](std::size_t i, std::size_t j) {
        out.push_back({doc_index, g[i], g[j], 1});
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (adjacent_only) {
            emit(i, i + 1);
        } else {
            for (std::size_t j = i + 1; j < n; ++j) emit(i, j);
        }
    }
    const std::size_t positives = out.size();
    out.reserve(positives * 2);
    for (std::size_t k = 0; k < positives; ++k) {
        out.push_back({doc_index, out[k].second, out[k].first, 0});
    }
    return out;
}

std::vector<PairExample> extract_pair_examples(const std::vector<Document>& docs,
                                               bool adjacent_only) {
    std::vector<PairExample> out;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto part = extract_pair_examples(docs[d], static_cast<int>(d), adjacent_only);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

DatasetSplit split_dataset(std::vector<Document> docs, double dev_frac, double test_frac,
                           std::uint64_t seed) {
    if (docs.size() < 10) {
        throw TooSmall("need at least 10 documents, got " + std::to_string(docs.size()));
    }
    std::mt19937_64 rng(seed);
    std::shuffle(docs.begin(), docs.end(), rng);
    const auto n = docs.size();
    const auto n_dev = static_cast<std::size_t>(std::llround(dev_frac * static_cast<double>(n)));
    const auto n_test = static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(n)));
    if (n_dev + n_test >= n) throw TooSmall("dev+test fractions leave no training documents");
    DatasetSplit split;
    split.seed = seed;
    split.dev.assign(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(n_dev));
    split.test.assign(docs.end() - static_cast<std::ptrdiff_t>(n_test), docs.end());
    split.train.assign(docs.begin() + static_cast<std::ptrdiff_t>(n_dev),
                       docs.end() - static_cast<std::ptrdiff_t>(n_test));
    return split;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    return f;
}

[[noreturn]] void bad_line(const std::string& path, std::size_t lineno, const std::string& what) {
    throw DataError(path + ":" + std::to_string(lineno) + ": " + what);
}

json parse_line(const std::string& path, std::size_t lineno, const std::string& line) {
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) bad_line(path, lineno, "invalid JSON record");
    return rec;
}

}  // namespace

std::vector<RawRecord> read_raw(const std::string& path) {
    auto f = open_in(path);
    std::vector<RawRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool decided = false;
    bool jsonl = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!decided) {
            json probe = json::parse(line, nullptr, false);
            jsonl = !probe.is_discarded() && probe.is_object() && probe.contains("abstract");
            decided = true;
        }
        RawRecord r;
        if (jsonl) {
            json rec = parse_line(path, lineno, line);
            if (!rec.contains("abstract") || !rec["abstract"].is_string()) {
                bad_line(path, lineno, "missing \"abstract\"");
            }
            r.abstract = rec["abstract"].get<std::string>();
            r.id = rec.value("id", std::to_string(lineno));
            r.category = rec.value("category", "unknown");
        } else {
            r.abstract = line;
            r.id = std::to_string(lineno);
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_raw_jsonl(const std::string& path, const std::vector<RawRecord>& records) {
    auto f = open_out(path);
    for (const auto& r : records) {
        json rec{{"id", r.id}, {"category", r.category}, {"abstract", r.abstract}};
        f << rec.dump() << '\n';
    }
    if (!f) throw DataError("failed writing " + path);
}

std::vector<Document> read_documents_jsonl(const std::string& path) {
    auto f = open_in(path);
    std::vector<Document> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_line(path, lineno, line);
        if (!rec.contains("sentences") || !rec["sentences"].is_array()) {
            bad_line(path, lineno, "missing \"sentences\"");
        }
        Document d;
        d.id = rec.value("id", std::to_string(lineno));
        d.category = rec.value("category", "unknown");
        for (auto& s : rec["sentences"]) {
            if (!s.is_string()) bad_line(path, lineno, "sentence must be a string");
            Sentence sent = make_sentence(s.get<std::string>());
            if (sent.tokens.empty()) bad_line(path, lineno, "sentence with no tokens");
            d.sentences.push_back(std::move(sent));
        }
        if (d.sentences.empty()) bad_line(path, lineno, "document with no sentences");
        if (rec.contains("gold_order")) {
            for (auto& v : rec["gold_order"]) d.gold.push_back(v.get<int>() - 1);
            if (!is_permutation_0n(d.gold, d.sentences.size())) {
                throw InvalidOrder(path + ":" + std::to_string(lineno) +
                                   ": gold_order is not a permutation of 1..n");
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

void write_prepared_jsonl(const std::string& path, const std::vector<Document>& docs) {
    auto f = open_out(path);
    for (const auto& d : docs) {
        json sents = json::array();
        for (const auto& s : d.sentences) sents.push_back(s.raw);
        json rec{{"id", d.id}, {"category", d.category}, {"sentences", std::move(sents)}};
        if (!d.gold.empty()) {
            json gold = json::array();
            for (int v : d.gold) gold.push_back(v + 1);
            rec["gold_order"] = std::move(gold);
        }
        f << rec.dump() << '\n';
    }
    if (!f) throw DataError("failed writing " + path);
}

std::vector<PredictionRecord> read_predictions_jsonl(const std::string& path) {
    auto f = open_in(path);
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_line(path, lineno, line);
        PredictionRecord p;
        p.id = rec.value("id", std::to_string(lineno));
        if (!rec.contains("gold_order") || !rec.contains("predicted_order")) {
            bad_line(path, lineno, "missing gold_order/predicted_order");
        }
        for (auto& v : rec["gold_order"]) p.gold_order.push_back(v.get<int>() - 1);
        for (auto& v : rec["predicted_order"]) p.predicted_order.push_back(v.get<int>() - 1);
        p.score = rec.value("score", 0.0);
        const std::size_t n = p.gold_order.size();
        if (!is_permutation_0n(p.gold_order, n) || !is_permutation_0n(p.predicted_order, n)) {
            throw InvalidOrder(path + ":" + std::to_string(lineno) +
                               ": orders must be permutations of 1..n");
        }
        out.push_back(std::move(p));
    }
    return out;
}

void write_predictions_jsonl(const std::string& path, const std::vector<PredictionRecord>& recs) {
    auto f = open_out(path);
    for (const auto& r : recs) {
        json gold = json::array();
        for (int v : r.gold_order) gold.push_back(v + 1);
        json pred = json::array();
        for (int v : r.predicted_order) pred.push_back(v + 1);
        json rec{{"id", r.id},
                 {"gold_order", std::move(gold)},
                 {"predicted_order", std::move(pred)},
                 {"score", r.score}};
        f << rec.dump() << '\n';
    }
    if (!f) throw DataError("failed writing " + path);
}

}  // namespace sentord
