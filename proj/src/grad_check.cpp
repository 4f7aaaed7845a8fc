#include "urbanhealth/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

double grad_check(
    const std::function<double(std::span<const Matrix>)>& f,
    const std::function<std::vector<Matrix>(std::span<const Matrix>)>& analytic,
    std::vector<Matrix> params, double h) {
  if (!(h >= 1e-7 && h <= 1e-4)) throw InputError("grad_check: h must be in [1e-7, 1e-4]");

  std::vector<Matrix> grads = analytic(params);
  if (grads.size() != params.size()) {
    throw InternalError("grad_check: analytic gradient count mismatch");
  }

  double max_rel = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!grads[i].same_shape(params[i])) {
      throw InternalError("grad_check: analytic gradient shape mismatch");
    }
    for (std::size_t k = 0; k < params[i].size(); ++k) {
      const double orig = params[i].data()[k];
      params[i].data()[k] = orig + h;
      const double fp = f(params);
      params[i].data()[k] = orig - h;
      const double fm = f(params);
      params[i].data()[k] = orig;
      const double numeric = (fp - fm) / (2.0 * h);
      const double a = grads[i].data()[k];
      const double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      max_rel = std::max(max_rel, std::fabs(a - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace urbanhealth
