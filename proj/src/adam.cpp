#include "sdlearn/adam.hpp"

#include <cmath>

namespace sdlearn::nn {
namespace {

template <class P, class G, class M, class V>
void update(P& p, const G& g, M& m, V& v, const AdamHyper& h, double c1, double c2) {
    m = h.beta1 * m + (1.0 - h.beta1) * g;
    v = h.beta2 * v + (1.0 - h.beta2) * g.cwiseAbs2();
    p.array() -= h.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + h.epsilon);
}

}  // namespace

AdamState AdamState::fresh(const ModelParams& like, const AdamHyper& hyper) {
    return {hyper, zeros_like(like), zeros_like(like), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state) {
    if (!params.same_shape(grads) || !params.same_shape(state.first_moment) ||
        !params.same_shape(state.second_moment)) {
        throw ShapeMismatch("adam_step: parameter, gradient and moment shapes differ");
    }
    ++state.step;
    const double c1 = 1.0 - std::pow(state.hyper.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.hyper.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        update(params.layers[l].weights, grads.layers[l].weights, state.first_moment.layers[l].weights,
               state.second_moment.layers[l].weights, state.hyper, c1, c2);
        update(params.layers[l].bias, grads.layers[l].bias, state.first_moment.layers[l].bias,
               state.second_moment.layers[l].bias, state.hyper, c1, c2);
    }
}

}  // namespace sdlearn::nn
