#include "urbanhealth/adam.hpp"

#include <cmath>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

void adam_step(AdamState& state, std::span<Matrix> params, std::span<const Matrix> grads) {
  if (params.size() != grads.size()) throw InputError("adam_step: params/grads count mismatch");
  if (state.m.empty()) {
    for (const Matrix& p : params) {
      state.m.emplace_back(p.rows(), p.cols());
      state.v.emplace_back(p.rows(), p.cols());
    }
  }
  if (state.m.size() != params.size()) throw InputError("adam_step: parameter set changed size");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].same_shape(grads[i]) || !params[i].same_shape(state.m[i])) {
      throw InputError("adam_step: shape mismatch");
    }
  }

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data();
    const double* g = grads[i].data();
    double* m = state.m[i].data();
    double* v = state.v[i].data();
    const std::size_t len = params[i].size();
    for (std::size_t k = 0; k < len; ++k) {
      if (state.weight_decay != 0.0) {
        p[k] -= state.learning_rate * state.weight_decay * p[k];
      }
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / bc1;
      const double v_hat = v[k] / bc2;
      p[k] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
      if (!std::isfinite(p[k])) throw InternalError("adam_step: parameter became non-finite");
    }
  }
}

}  // namespace urbanhealth
