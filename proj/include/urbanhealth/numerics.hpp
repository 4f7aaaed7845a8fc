#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "urbanhealth/matrix.hpp"

namespace urbanhealth {

double leaky_relu(double x, double slope);
Matrix leaky_relu(const Matrix& m, double slope);

// exponential linear unit, alpha = 1
double elu(double x);
Matrix elu(const Matrix& m);

// Max-shifted softmax over the masked positions; entries outside the mask
// come back zero. The mask must be non-empty and scores finite.
std::vector<double> masked_softmax(std::span<const double> scores,
                                   std::span<const std::size_t> mask);

// In-place softmax of scores[begin, end) writing the distribution over that
// contiguous segment. Shared core for masked_softmax and the per-neighborhood
// attention normalization.
void segment_softmax_in_place(double* scores, std::size_t begin, std::size_t end);

// Mean over `subset` rows of -ln p(true class). `probs` rows must sum to 1
// within 1e-6; probabilities are clamped at 1e-12 before the log.
double cross_entropy(const Matrix& probs, std::span<const int> labels,
                     std::span<const std::size_t> subset);

inline constexpr double kProbClamp = 1e-12;

}  // namespace urbanhealth
