#include "sentord/optim.hpp"

#include <cmath>

#include "sentord/errors.hpp"

namespace sentord {

AdadeltaState::AdadeltaState(const std::vector<Parameter*>& params) {
    accum_grad.reserve(params.size());
    accum_delta.reserve(params.size());
    for (const Parameter* p : params) {
        accum_grad.push_back(Tensor::zeros_like(p->value));
        accum_delta.push_back(Tensor::zeros_like(p->value));
    }
}

namespace {

void mask_frozen_row(Parameter& p) {
    if (!p.frozen_row) return;
    const std::size_t cols = p.value.cols();
    const std::size_t base = *p.frozen_row * cols;
    for (std::size_t j = 0; j < cols; ++j) p.grad[base + j] = 0.0;
}

}  // namespace

void optimizer_step(const std::vector<Parameter*>& params, AdadeltaState& state,
                    const OptimConfig& cfg) {
    if (cfg.adadelta && state.accum_grad.size() != params.size()) {
        throw ShapeError("optimizer state does not match parameter list");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        Parameter& p = *params[k];
        mask_frozen_row(p);
        if (cfg.adadelta) {
            Tensor& eg = state.accum_grad[k];
            Tensor& ed = state.accum_delta[k];
            for (std::size_t i = 0; i < p.value.numel(); ++i) {
                const double g = p.grad[i];
                eg[i] = cfg.rho * eg[i] + (1.0 - cfg.rho) * g * g;
                const double dx = -(std::sqrt(ed[i] + cfg.eps) / std::sqrt(eg[i] + cfg.eps)) * g;
                ed[i] = cfg.rho * ed[i] + (1.0 - cfg.rho) * dx * dx;
                p.value[i] += cfg.alpha * dx;
            }
        } else {
            for (std::size_t i = 0; i < p.value.numel(); ++i) {
                p.value[i] -= cfg.alpha * p.grad[i];
            }
        }
        p.zero_grad();
    }
}

}  // namespace sentord
