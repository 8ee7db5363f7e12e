#include "sentord/encoders.hpp"

#include <cmath>

#include "sentord/errors.hpp"
#include "sentord/vocab.hpp"

namespace sentord {

namespace {

std::vector<int> padded_ids(const ModelBundle& m, const std::vector<int>& ids) {
    std::vector<int> out = ids;
    if (m.config.encoder == EncoderKind::cnn) {
        while (out.size() < m.config.filter_len) out.push_back(Vocabulary::kPad);
    }
    return out;
}

// y = W^T x accumulated in the same element order as Tape::matvec_t.
void matvec_t_plain(const Tensor& w, const double* x, double* y) {
    const std::size_t m = w.rows(), n = w.cols();
    for (std::size_t j = 0; j < n; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double xv = x[i];
        for (std::size_t j = 0; j < n; ++j) y[j] += w.at(i, j) * xv;
    }
}

Tensor encode_cbow_plain(const ModelBundle& m, const std::vector<int>& ids) {
    const std::size_t d = m.config.dim;
    const double inv = 1.0 / static_cast<double>(ids.size());
    Tensor e({d});
    for (int id : ids)
        for (std::size_t j = 0; j < d; ++j) e[j] += m.embedding.value.at(static_cast<std::size_t>(id), j);
    for (std::size_t j = 0; j < d; ++j) e[j] *= inv;
    return e;
}

Tensor encode_cnn_plain(const ModelBundle& m, const std::vector<int>& ids) {
    const std::size_t d = m.config.dim;
    const std::size_t lf = m.config.filter_len;
    const std::size_t n = ids.size();
    std::vector<double> window(d * lf);
    std::vector<double> z(d);
    Tensor e({d});
    for (std::size_t k = 0; k + lf <= n; ++k) {
        for (std::size_t w = 0; w < lf; ++w) {
            const auto id = static_cast<std::size_t>(ids[k + w]);
            for (std::size_t j = 0; j < d; ++j) window[w * d + j] = m.embedding.value.at(id, j);
        }
        matvec_t_plain(m.w_cov.value, window.data(), z.data());
        for (std::size_t j = 0; j < d; ++j) {
            const double cov = std::tanh(z[j] + m.b_cov.value[j]);
            if (k == 0 || cov > e[j]) e[j] = cov;
        }
    }
    return e;
}

Tensor encode_lstm_plain(const ModelBundle& m, const std::vector<int>& ids) {
    const std::size_t d = m.config.dim;
    std::vector<double> h(d, 0.0), c(d, 0.0);
    std::vector<double> x(2 * d), z(4 * d);
    std::vector<double> cf(d), ci(d);
    for (int id : ids) {
        for (std::size_t j = 0; j < d; ++j) x[j] = m.embedding.value.at(static_cast<std::size_t>(id), j);
        for (std::size_t j = 0; j < d; ++j) x[d + j] = h[j];
        matvec_t_plain(m.w_g.value, x.data(), z.data());
        for (std::size_t j = 0; j < 4 * d; ++j) z[j] += m.b_g.value[j];
        for (std::size_t j = 0; j < d; ++j) {
            const double gi = stable_sigmoid(z[j]);
            const double go = stable_sigmoid(z[d + j]);
            const double gf = stable_sigmoid(z[2 * d + j]);
            const double cand = std::tanh(z[3 * d + j]);
            cf[j] = c[j] * gf;
            ci[j] = cand * gi;
            c[j] = cf[j] + ci[j];
            h[j] = go * std::tanh(c[j]);
        }
    }
    Tensor e({d});
    for (std::size_t j = 0; j < d; ++j) e[j] = h[j];
    return e;
}

}  // namespace

Tensor encode_sentence(const ModelBundle& m, const std::vector<int>& ids) {
    if (ids.empty()) throw EmptySentence();
    switch (m.config.encoder) {
        case EncoderKind::cbow: return encode_cbow_plain(m, ids);
        case EncoderKind::cnn: return encode_cnn_plain(m, padded_ids(m, ids));
        case EncoderKind::lstm: return encode_lstm_plain(m, ids);
    }
    throw DataError("unknown encoder kind");
}

EncodedSentence encode_sentence(Tape& t, ModelBundle& m, const std::vector<int>& ids) {
    if (ids.empty()) throw EmptySentence();
    const std::size_t d = m.config.dim;
    EncodedSentence out;
    out.n_words = ids.size();

    Var table = t.param(m.embedding);
    const std::vector<int> use = padded_ids(m, ids);
    out.rows = t.lookup(table, use);

    switch (m.config.encoder) {
        case EncoderKind::cbow: {
            out.sentence = t.mean_rows(out.rows);
            return out;
        }
        case EncoderKind::cnn: {
            const std::size_t lf = m.config.filter_len;
            Var w = t.param(m.w_cov);
            Var b = t.param(m.b_cov);
            std::vector<Var> covs;
            for (std::size_t k = 0; k + lf <= use.size(); ++k) {
                std::vector<Var> pieces;
                pieces.reserve(lf);
                for (std::size_t i = 0; i < lf; ++i) pieces.push_back(t.row(out.rows, k + i));
                Var window = lf == 1 ? pieces[0] : t.concat(pieces);
                covs.push_back(t.tanh(t.add(t.matvec_t(w, window), b)));
            }
            out.sentence = covs.size() == 1 ? covs[0] : t.max_over(covs);
            return out;
        }
        case EncoderKind::lstm: {
            Var w = t.param(m.w_g);
            Var b = t.param(m.b_g);
            Var h = t.leaf(Tensor({d}));
            Var c = t.leaf(Tensor({d}));
            for (std::size_t step = 0; step < use.size(); ++step) {
                Var x = t.concat({t.row(out.rows, step), h});
                Var z = t.add(t.matvec_t(w, x), b);
                Var gi = t.sigmoid(t.slice(z, 0, d));
                Var go = t.sigmoid(t.slice(z, d, d));
                Var gf = t.sigmoid(t.slice(z, 2 * d, d));
                Var cand = t.tanh(t.slice(z, 3 * d, d));
                c = t.add(t.mul(c, gf), t.mul(cand, gi));
                h = t.mul(go, t.tanh(c));
            }
            out.sentence = h;
            return out;
        }
    }
    throw DataError("unknown encoder kind");
}

}  // namespace sentord
