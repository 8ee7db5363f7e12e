#pragma once

#include <vector>

#include "sentord/tensor.hpp"

namespace sentord {

struct OptimConfig {
    bool adadelta = true;  // false: plain SGD
    double alpha = 0.2;    // scales the adadelta update (plain learning rate for SGD)
    double rho = 0.95;
    double eps = 1e-6;
};

/// Running averages for adadelta, one pair of tensors per parameter, aligned
/// with the parameter list passed at construction.
struct AdadeltaState {
    std::vector<Tensor> accum_grad;   // E[g^2]
    std::vector<Tensor> accum_delta;  // E[dx^2]

    AdadeltaState() = default;
    explicit AdadeltaState(const std::vector<Parameter*>& params);
};

/// Applies one update to every parameter from its accumulated gradient, then
/// zeroes the gradients. A parameter's frozen_row never moves.
void optimizer_step(const std::vector<Parameter*>& params, AdadeltaState& state,
                    const OptimConfig& cfg);

}  // namespace sentord
