#include "sentord/ordering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "sentord/errors.hpp"

namespace sentord {

namespace {

struct Hypothesis {
    std::vector<int> order;
    double award = 0.0;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.award != b.award) return a.award > b.award;
    return a.order < b.order;
}

}  // namespace

DecodedOrder beam_search_decode_scored(const PairMatrix& pm, std::size_t beam_size) {
    if (beam_size < 1) throw InvalidBeam("beam size must be at least 1");
    const std::size_t n = pm.n;
    if (n == 0) throw EmptyText();

    std::vector<Hypothesis> beam;
    beam.reserve(n);
    for (std::size_t s = 0; s < n; ++s) beam.push_back({{static_cast<int>(s)}, 0.0});

    std::vector<Hypothesis> extended;
    std::vector<char> used(n);
    for (std::size_t round = 1; round < n; ++round) {
        extended.clear();
        extended.reserve(beam.size() * (n - round));
        for (const auto& hyp : beam) {
            std::fill(used.begin(), used.end(), 0);
            for (int v : hyp.order) used[static_cast<std::size_t>(v)] = 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j]) continue;
                double award = hyp.award;
                for (int v : hyp.order) award += std::log(pm.at(static_cast<std::size_t>(v), j));
                Hypothesis ext;
                ext.order = hyp.order;
                ext.order.push_back(static_cast<int>(j));
                ext.award = award;
                extended.push_back(std::move(ext));
            }
        }
        std::sort(extended.begin(), extended.end(), better);
        if (extended.size() > beam_size) extended.resize(beam_size);
        beam.swap(extended);
    }

    auto best = std::min_element(beam.begin(), beam.end(),
                                 [](const Hypothesis& a, const Hypothesis& b) { return better(a, b); });
    return {best->order, best->award};
}

std::vector<int> beam_search_decode(const PairMatrix& pm, std::size_t beam_size) {
    return beam_search_decode_scored(pm, beam_size).order;
}

std::vector<int> brute_force_decode(const PairMatrix& pm) {
    const std::size_t n = pm.n;
    if (n == 0) throw EmptyText();
    if (n > 8) throw TooLarge("brute force decoding is capped at 8 sentences, got " +
                              std::to_string(n));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_score = total_score(pm, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double s = total_score(pm, perm);
        if (s > best_score) {
            best_score = s;
            best = perm;
        }
    }
    return best;
}

namespace {

PredictionRecord predict_one(const Document& doc, const ModelBundle& model,
                             const PredictOptions& opts, std::size_t index) {
    const std::size_t n = doc.size();
    PredictionRecord rec;
    rec.id = doc.id;

    const Document* target = &doc;
    Document shuffled;
    if (doc.gold.empty()) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::mt19937_64 rng(opts.shuffle_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        std::shuffle(perm.begin(), perm.end(), rng);
        shuffled.id = doc.id;
        shuffled.category = doc.category;
        shuffled.sentences.reserve(n);
        for (int v : perm) shuffled.sentences.push_back(doc.sentences[static_cast<std::size_t>(v)]);
        rec.gold_order.resize(n);
        for (std::size_t k = 0; k < n; ++k) rec.gold_order[perm[k]] = static_cast<int>(k);
        target = &shuffled;
    } else {
        rec.gold_order = doc.gold;
    }

    const PairMatrix pm = build_pair_matrix(model, *target);
    rec.predicted_order = beam_search_decode(pm, opts.beam_size);
    rec.score = total_score(pm, rec.predicted_order);
    return rec;
}

}  // namespace

std::vector<PredictionRecord> predict_corpus(const std::vector<Document>& docs,
                                             const ModelBundle& model,
                                             const PredictOptions& opts) {
    std::vector<PredictionRecord> out(docs.size());
    const std::size_t workers = std::max<std::size_t>(1, opts.threads);
    if (workers == 1) {
        for (std::size_t i = 0; i < docs.size(); ++i) out[i] = predict_one(docs[i], model, opts, i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= docs.size()) return;
            try {
                out[i] = predict_one(docs[i], model, opts, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace sentord
