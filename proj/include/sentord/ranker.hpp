#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "sentord/corpus.hpp"
#include "sentord/encoders.hpp"
#include "sentord/model.hpp"
#include "sentord/optim.hpp"

namespace sentord {

double pair_logit(const ModelBundle& m, const Tensor& e_i, const Tensor& e_j);

/// p = sigmoid(W_p . tanh(W_h^T (e_i ++ e_j) + b_h) + b_p), strictly inside (0,1).
double pair_probability(const ModelBundle& m, const Tensor& e_i, const Tensor& e_j);

/// Tape twin of pair_logit; returns a (1,) node.
Var pair_logit(Tape& t, ModelBundle& m, Var e_i, Var e_j);

/// Directed precedence probabilities for one document; diagonal is NaN and
/// must not be read. p_ji is a separate head evaluation, never 1 - p_ij.
struct PairMatrix {
    std::size_t n = 0;
    std::vector<double> p;

    PairMatrix() = default;
    explicit PairMatrix(std::size_t n_)
        : n(n_), p(n_ * n_, std::numeric_limits<double>::quiet_NaN()) {}

    double at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return p[i * n + j]; }
};

PairMatrix build_pair_matrix(const ModelBundle& m, const Document& doc);

double score_pair(const PairMatrix& pm, const std::vector<int>& order, std::size_t i,
                  std::size_t j);
double total_score(const PairMatrix& pm, const std::vector<int>& order);

/// Mean stable binary cross-entropy from logits plus lambda * ||theta||^2
/// (embedding table included; the PAD row is zero so it self-excludes).
/// Fills parameter gradients when backprop is set.
double batch_loss(ModelBundle& m, const std::vector<Document>& docs,
                  std::span<const PairExample> batch, double lambda, bool backprop);

/// Fraction of examples with (p > 0.5) == (label == 1); p == 0.5 counts wrong.
double pair_accuracy(const ModelBundle& m, const std::vector<Document>& docs,
                     std::span<const PairExample> examples);

struct EpochLog {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double dev_pair_acc = 0.0;
    double seconds = 0.0;
};

struct TrainResult {
    ModelBundle model;  // best dev snapshot
    std::vector<EpochLog> log;
    double best_dev_acc = 0.0;
    std::size_t best_epoch = 0;
};

/// Mini-batch training with per-epoch reshuffling, dev-accuracy selection and
/// early stop after `patience` epochs without improvement. Docs must already
/// be encoded against `vocab`. Writes one JSONL line per epoch to log_stream
/// when given.
TrainResult train_model(const TrainConfig& cfg, const std::vector<Document>& train_docs,
                        const std::vector<Document>& dev_docs, const Vocabulary& vocab,
                        std::ostream* log_stream = nullptr);

}  // namespace sentord
