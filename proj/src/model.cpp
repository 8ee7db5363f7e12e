#include "sentord/model.hpp"

#include <random>

#include "sentord/errors.hpp"
#include "sentord/vocab.hpp"

namespace sentord {

std::string encoder_name(EncoderKind k) {
    switch (k) {
        case EncoderKind::cbow: return "cbow";
        case EncoderKind::cnn: return "cnn";
        case EncoderKind::lstm: return "lstm";
    }
    throw DataError("unknown encoder kind");
}

EncoderKind parse_encoder(const std::string& name) {
    if (name == "cbow") return EncoderKind::cbow;
    if (name == "cnn") return EncoderKind::cnn;
    if (name == "lstm") return EncoderKind::lstm;
    throw DataError("unknown encoder \"" + name + "\" (expected cbow, cnn or lstm)");
}

namespace {

void fill_uniform(Tensor& t, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-0.1, 0.1);
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = dist(rng);
}

}  // namespace

ModelBundle::ModelBundle(ModelConfig cfg) : config(std::move(cfg)) {
    const std::size_t v = config.vocab_size;
    const std::size_t d = config.dim;
    const std::size_t h = config.hidden;
    const std::size_t lf = config.filter_len;
    if (v < 2) throw DataError("vocabulary must hold at least the reserved ids");
    if (d < 1 || h < 1 || lf < 1) throw DataError("model dimensions must be positive");

    std::mt19937_64 rng(config.seed);

    embedding = Parameter("embedding", Tensor({v, d}));
    fill_uniform(embedding.value, rng);
    embedding.frozen_row = static_cast<std::size_t>(Vocabulary::kPad);
    for (std::size_t j = 0; j < d; ++j) embedding.value.at(*embedding.frozen_row, j) = 0.0;

    if (config.encoder == EncoderKind::cnn) {
        w_cov = Parameter("w_cov", Tensor({d * lf, d}));
        fill_uniform(w_cov.value, rng);
        b_cov = Parameter("b_cov", Tensor({d}));
    } else if (config.encoder == EncoderKind::lstm) {
        w_g = Parameter("w_g", Tensor({2 * d, 4 * d}));
        fill_uniform(w_g.value, rng);
        b_g = Parameter("b_g", Tensor({4 * d}));
        for (std::size_t j = 2 * d; j < 3 * d; ++j) b_g.value[j] = 1.0;  // forget gate
    }

    w_h = Parameter("w_h", Tensor({2 * d, h}));
    fill_uniform(w_h.value, rng);
    b_h = Parameter("b_h", Tensor({h}));
    w_p = Parameter("w_p", Tensor({h}));
    fill_uniform(w_p.value, rng);
    b_p = Parameter("b_p", Tensor({1}));
}

std::vector<Parameter*> ModelBundle::params() {
    std::vector<Parameter*> out{&embedding};
    if (config.encoder == EncoderKind::cnn) {
        out.push_back(&w_cov);
        out.push_back(&b_cov);
    } else if (config.encoder == EncoderKind::lstm) {
        out.push_back(&w_g);
        out.push_back(&b_g);
    }
    out.push_back(&w_h);
    out.push_back(&b_h);
    out.push_back(&w_p);
    out.push_back(&b_p);
    return out;
}

std::vector<const Parameter*> ModelBundle::params() const {
    auto mut = const_cast<ModelBundle*>(this)->params();
    return {mut.begin(), mut.end()};
}

void ModelBundle::zero_grads() {
    for (Parameter* p : params()) p->zero_grad();
}

}  // namespace sentord
