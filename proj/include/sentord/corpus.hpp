#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sentord/vocab.hpp"

namespace sentord {

inline constexpr std::size_t kMaxSentenceTokens = 128;

struct Sentence {
    std::string raw;
    std::vector<std::string> tokens;
    std::vector<int> ids;  // filled by encode_corpus
};

/// Sentences are stored in presentation order. `gold` lists sentence indices
/// (0-based) in gold reading order; empty means presentation order is gold.
struct Document {
    std::string id;
    std::string category = "unknown";
    std::vector<Sentence> sentences;
    std::vector<int> gold;

    std::size_t size() const { return sentences.size(); }
    std::vector<int> gold_arrangement() const;  // explicit, identity filled in
};

struct RawRecord {
    std::string id;
    std::string category = "unknown";
    std::string abstract;
};

struct PairExample {
    std::int32_t doc = 0;
    std::int32_t first = 0;
    std::int32_t second = 0;
    std::int32_t label = 1;  // 1 iff `first` precedes `second` in gold order
};

struct DatasetSplit {
    std::vector<Document> train;
    std::vector<Document> dev;
    std::vector<Document> test;
    std::uint64_t seed = 0;
};

/// Split + tokenize + truncate overlong sentences.
Document make_document(std::string id, std::string category, const std::string& text);

Vocabulary build_vocabulary(const std::vector<Document>& docs, std::size_t min_freq);
void encode_corpus(std::vector<Document>& docs, const Vocabulary& vocab);

/// For each gold pair i<j emits (i,j,1); the reversed copies, labelled 0,
/// follow in the same pair order. doc_index goes into PairExample::doc.
std::vector<PairExample> extract_pair_examples(const Document& doc, int doc_index,
                                               bool adjacent_only = false);
std::vector<PairExample> extract_pair_examples(const std::vector<Document>& docs,
                                               bool adjacent_only = false);

/// Shuffle then cut: dev = first dev_frac, test = last test_frac, train = middle.
DatasetSplit split_dataset(std::vector<Document> docs, double dev_frac, double test_frac,
                           std::uint64_t seed);

/// Raw input: JSONL {"id","category","abstract"} or plain text, one abstract
/// per line (auto-detected).
std::vector<RawRecord> read_raw(const std::string& path);
void write_raw_jsonl(const std::string& path, const std::vector<RawRecord>& records);

/// JSONL {"id","category","sentences":[str,...]} with optional 1-based
/// "gold_order" (when sentences arrive shuffled).
std::vector<Document> read_documents_jsonl(const std::string& path);
void write_prepared_jsonl(const std::string& path, const std::vector<Document>& docs);

struct PredictionRecord {
    std::string id;
    std::vector<int> gold_order;       // 0-based in memory, 1-based in files
    std::vector<int> predicted_order;
    double score = 0.0;
};

std::vector<PredictionRecord> read_predictions_jsonl(const std::string& path);
void write_predictions_jsonl(const std::string& path, const std::vector<PredictionRecord>& recs);

bool is_permutation_0n(const std::vector<int>& order, std::size_t n);

}  // namespace sentord
