#pragma once

#include <cstdint>

#include "sdlearn/mlp.hpp"

namespace sdlearn::nn {

struct AdamHyper {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamHyper hyper;
    ModelParams first_moment;
    ModelParams second_moment;
    std::int64_t step = 0;

    static AdamState fresh(const ModelParams& like, const AdamHyper& hyper);
};

// One bias-corrected Adam update of `params` in place.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state);

}  // namespace sdlearn::nn
