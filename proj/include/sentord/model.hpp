#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sentord/tensor.hpp"

namespace sentord {

enum class EncoderKind { cbow, cnn, lstm };

std::string encoder_name(EncoderKind k);
EncoderKind parse_encoder(const std::string& name);

struct ModelConfig {
    EncoderKind encoder = EncoderKind::cbow;
    std::size_t vocab_size = 2;
    std::size_t dim = 25;        // d = d_s = d_f = d_r
    std::size_t hidden = 100;    // head hidden layer h
    std::size_t filter_len = 3;  // cnn window l_f
    std::uint64_t seed = 1;
    std::string init_spec = "uniform(-0.1,0.1);bias=0;forget_bias=1";
};

/// One embedding table shared by both sentences of a pair, one encoder's
/// weights, and the pairwise head.
struct ModelBundle {
    ModelConfig config;
    Parameter embedding;  // (|V|, d); PAD row frozen at zero
    Parameter w_cov;      // cnn: (d*l_f, d)
    Parameter b_cov;      // cnn: (d,)
    Parameter w_g;        // lstm: (2d, 4d), gate blocks ordered (i, o, f, c~)
    Parameter b_g;        // lstm: (4d,)
    Parameter w_h;        // head: (2d, h)
    Parameter b_h;        // head: (h,)
    Parameter w_p;        // head: (h,)
    Parameter b_p;        // head: (1,)

    ModelBundle() = default;
    explicit ModelBundle(ModelConfig cfg);

    /// Trainable parameters in serialization order.
    std::vector<Parameter*> params();
    std::vector<const Parameter*> params() const;
    void zero_grads();
};

struct TrainConfig {
    EncoderKind encoder = EncoderKind::cbow;
    std::size_t dim = 25;
    std::size_t hidden = 100;
    std::size_t filter_len = 3;
    std::size_t batch = 128;
    double alpha = 0.2;
    double lambda = 1e-4;
    double rho = 0.95;
    double eps = 1e-6;
    std::size_t epochs = 20;
    std::size_t patience = 3;
    std::uint64_t seed = 1;
    bool adadelta = true;
    bool adjacent_only = false;
    std::size_t min_freq = 3;
};

}  // namespace sentord
