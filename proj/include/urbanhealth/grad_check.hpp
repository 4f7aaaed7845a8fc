#pragma once

#include <functional>
#include <span>
#include <vector>

#include "urbanhealth/matrix.hpp"

namespace urbanhealth {

// Compares an analytic gradient against central finite differences,
// coordinate by coordinate, and returns the largest relative error
// |a - n| / max(|a|, |n|, 1e-8). `f` must be a pure scalar function of the
// parameter set; `analytic` returns one gradient matrix per parameter.
double grad_check(
    const std::function<double(std::span<const Matrix>)>& f,
    const std::function<std::vector<Matrix>(std::span<const Matrix>)>& analytic,
    std::vector<Matrix> params, double h);

}  // namespace urbanhealth
