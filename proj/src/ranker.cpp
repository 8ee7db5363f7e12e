#include "sentord/ranker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sentord/errors.hpp"

namespace sentord {

namespace {

void require_dim(const ModelBundle& m, const Tensor& e) {
    if (e.rank() != 1 || e.numel() != m.config.dim) {
        throw ShapeError("sentence embedding " + e.shape_str() + " does not match model dim (" +
                         std::to_string(m.config.dim) + ")");
    }
}

}  // namespace

double pair_logit(const ModelBundle& m, const Tensor& e_i, const Tensor& e_j) {
    require_dim(m, e_i);
    require_dim(m, e_j);
    const std::size_t d = m.config.dim;
    const std::size_t h = m.config.hidden;
    std::vector<double> cat(2 * d);
    for (std::size_t k = 0; k < d; ++k) cat[k] = e_i[k];
    for (std::size_t k = 0; k < d; ++k) cat[d + k] = e_j[k];
    std::vector<double> hid(h, 0.0);
    for (std::size_t i = 0; i < 2 * d; ++i) {
        const double xv = cat[i];
        for (std::size_t k = 0; k < h; ++k) hid[k] += m.w_h.value.at(i, k) * xv;
    }
    double z = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        z += m.w_p.value[k] * std::tanh(hid[k] + m.b_h.value[k]);
    }
    return z + m.b_p.value[0];
}

double pair_probability(const ModelBundle& m, const Tensor& e_i, const Tensor& e_j) {
    return stable_sigmoid(pair_logit(m, e_i, e_j));
}

Var pair_logit(Tape& t, ModelBundle& m, Var e_i, Var e_j) {
    Var cat = t.concat({e_i, e_j});
    Var hid = t.tanh(t.add(t.matvec_t(t.param(m.w_h), cat), t.param(m.b_h)));
    return t.add(t.dot(t.param(m.w_p), hid), t.param(m.b_p));
}

PairMatrix build_pair_matrix(const ModelBundle& m, const Document& doc) {
    const std::size_t n = doc.size();
    std::vector<Tensor> emb;
    emb.reserve(n);
    for (const auto& s : doc.sentences) {
        if (s.ids.empty()) throw DataError("document " + doc.id + " is not encoded");
        emb.push_back(encode_sentence(m, s.ids));
    }
    PairMatrix pm(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            pm.at(i, j) = pair_probability(m, emb[i], emb[j]);
        }
    return pm;
}

double score_pair(const PairMatrix& pm, const std::vector<int>& order, std::size_t i,
                  std::size_t j) {
    if (!is_permutation_0n(order, pm.n)) throw InvalidOrder("order is not a permutation");
    return std::log(pm.at(static_cast<std::size_t>(order[i]), static_cast<std::size_t>(order[j])));
}

double total_score(const PairMatrix& pm, const std::vector<int>& order) {
    if (!is_permutation_0n(order, pm.n)) throw InvalidOrder("order is not a permutation");
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            total += std::log(pm.at(static_cast<std::size_t>(order[i]),
                                    static_cast<std::size_t>(order[j])));
        }
    return total;
}

namespace {

const std::vector<int>& example_ids(const std::vector<Document>& docs, std::int32_t doc,
                                    std::int32_t sent) {
    const auto& d = docs.at(static_cast<std::size_t>(doc));
    const auto& s = d.sentences.at(static_cast<std::size_t>(sent));
    if (s.ids.empty()) throw DataError("document " + d.id + " is not encoded");
    return s.ids;
}

}  // namespace

double batch_loss(ModelBundle& m, const std::vector<Document>& docs,
                  std::span<const PairExample> batch, double lambda, bool backprop) {
    if (batch.empty()) throw EmptyBatch();
    Tape t;
    std::map<std::pair<std::int32_t, std::int32_t>, Var> cache;
    auto encoded = [&](std::int32_t doc, std::int32_t sent) {
        const auto key = std::make_pair(doc, sent);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Var v = encode_sentence(t, m, example_ids(docs, doc, sent)).sentence;
        cache.emplace(key, v);
        return v;
    };
    std::vector<Var> terms;
    terms.reserve(batch.size());
    for (const auto& ex : batch) {
        Var z = pair_logit(t, m, encoded(ex.doc, ex.first), encoded(ex.doc, ex.second));
        terms.push_back(ex.label == 1 ? t.softplus(t.scale(z, -1.0)) : t.softplus(z));
    }
    Var loss = t.scale(terms.size() == 1 ? terms[0] : t.add_n(terms),
                       1.0 / static_cast<double>(terms.size()));
    if (lambda != 0.0) {
        std::vector<Var> sq;
        for (Parameter* p : m.params()) sq.push_back(t.sum_squares(t.param(*p)));
        loss = t.add(loss, t.scale(sq.size() == 1 ? sq[0] : t.add_n(sq), lambda));
    }
    const double value = t.value(loss).item();
    if (backprop) t.backward(loss);
    return value;
}

double pair_accuracy(const ModelBundle& m, const std::vector<Document>& docs,
                     std::span<const PairExample> examples) {
    if (examples.empty()) throw EmptyBatch();
    std::map<std::pair<std::int32_t, std::int32_t>, Tensor> cache;
    auto encoded = [&](std::int32_t doc, std::int32_t sent) -> const Tensor& {
        const auto key = std::make_pair(doc, sent);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, encode_sentence(m, example_ids(docs, doc, sent))).first;
        }
        return it->second;
    };
    std::size_t correct = 0;
    for (const auto& ex : examples) {
        const double p = pair_probability(m, encoded(ex.doc, ex.first), encoded(ex.doc, ex.second));
        if ((p > 0.5) == (ex.label == 1) && p != 0.5) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(examples.size());
}

TrainResult train_model(const TrainConfig& cfg, const std::vector<Document>& train_docs,
                        const std::vector<Document>& dev_docs, const Vocabulary& vocab,
                        std::ostream* log_stream) {
    ModelConfig mc;
    mc.encoder = cfg.encoder;
    mc.vocab_size = vocab.size();
    mc.dim = cfg.dim;
    mc.hidden = cfg.hidden;
    mc.filter_len = cfg.filter_len;
    mc.seed = cfg.seed;
    ModelBundle model(mc);

    TrainResult result;
    result.model = model;
    result.best_dev_acc = -1.0;
    if (cfg.epochs == 0) {
        result.best_dev_acc = 0.0;
        return result;
    }

    std::vector<PairExample> examples = extract_pair_examples(train_docs, cfg.adjacent_only);
    if (examples.empty()) throw EmptyBatch();
    std::vector<PairExample> dev_examples = extract_pair_examples(dev_docs, cfg.adjacent_only);

    AdadeltaState state(model.params());
    OptimConfig oc;
    oc.adadelta = cfg.adadelta;
    oc.alpha = cfg.alpha;
    oc.rho = cfg.rho;
    oc.eps = cfg.eps;

    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x5deece66dULL);
    const std::size_t batch = std::max<std::size_t>(1, cfg.batch);
    std::size_t global_step = 0;
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        std::shuffle(examples.begin(), examples.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t example_count = 0;
        for (std::size_t off = 0; off < examples.size(); off += batch) {
            const std::size_t count = std::min(batch, examples.size() - off);
            std::span<const PairExample> b(examples.data() + off, count);
            ++global_step;
            const double loss = batch_loss(model, train_docs, b, cfg.lambda, true);
            if (!std::isfinite(loss)) {
                std::ostringstream os;
                os << "non-finite loss at step " << global_step << " (epoch " << epoch
                   << "); batch documents:";
                std::vector<std::int32_t> ids;
                for (const auto& ex : b) ids.push_back(ex.doc);
                std::sort(ids.begin(), ids.end());
                ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
                for (auto id : ids) os << ' ' << train_docs[static_cast<std::size_t>(id)].id;
                throw TrainDiverged(os.str());
            }
            loss_sum += loss * static_cast<double>(count);
            example_count += count;
            optimizer_step(model.params(), state, oc);
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.train_loss = loss_sum / static_cast<double>(example_count);
        entry.dev_pair_acc =
            dev_examples.empty() ? 0.0 : pair_accuracy(model, dev_docs, dev_examples);
        entry.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.log.push_back(entry);
        if (log_stream) {
            nlohmann::json line{{"epoch", entry.epoch},
                                {"train_loss", entry.train_loss},
                                {"dev_pair_acc", entry.dev_pair_acc},
                                {"seconds", entry.seconds}};
            (*log_stream) << line.dump() << '\n';
        }

        if (entry.dev_pair_acc > result.best_dev_acc) {
            result.best_dev_acc = entry.dev_pair_acc;
            result.best_epoch = epoch;
            result.model = model;
            since_best = 0;
        } else {
            ++since_best;
            if (since_best >= cfg.patience) break;
        }
    }
    return result;
}

}  // namespace sentord
