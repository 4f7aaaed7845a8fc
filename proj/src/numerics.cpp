#include "urbanhealth/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

double leaky_relu(double x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw InputError("leaky_relu: slope must be in (0,1)");
  if (!std::isfinite(x)) throw InternalError("leaky_relu: non-finite input");
  return x >= 0.0 ? x : slope * x;
}

Matrix leaky_relu(const Matrix& m, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw InputError("leaky_relu: slope must be in (0,1)");
  if (!m.all_finite()) throw InternalError("leaky_relu: non-finite input");
  Matrix out = m;
  double* d = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (d[i] < 0.0) d[i] *= slope;
  }
  return out;
}

double elu(double x) {
  if (!std::isfinite(x)) throw InternalError("elu: non-finite input");
  return x >= 0.0 ? x : std::expm1(x);
}

Matrix elu(const Matrix& m) {
  if (!m.all_finite()) throw InternalError("elu: non-finite input");
  Matrix out = m;
  double* d = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (d[i] < 0.0) d[i] = std::expm1(d[i]);
  }
  return out;
}

void segment_softmax_in_place(double* scores, std::size_t begin, std::size_t end) {
  if (begin >= end) throw InternalError("segment_softmax: empty segment");
  double mx = scores[begin];
  for (std::size_t i = begin + 1; i < end; ++i) mx = std::max(mx, scores[i]);
  double total = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    scores[i] = std::exp(scores[i] - mx);
    total += scores[i];
  }
  for (std::size_t i = begin; i < end; ++i) scores[i] /= total;
}

std::vector<double> masked_softmax(std::span<const double> scores,
                                   std::span<const std::size_t> mask) {
  if (mask.empty()) throw InputError("masked_softmax: empty mask");
  for (std::size_t i : mask) {
    if (i >= scores.size()) throw InputError("masked_softmax: mask index out of range");
    if (!std::isfinite(scores[i])) throw InternalError("masked_softmax: non-finite score");
  }
  std::vector<double> packed;
  packed.reserve(mask.size());
  for (std::size_t i : mask) packed.push_back(scores[i]);
  segment_softmax_in_place(packed.data(), 0, packed.size());
  std::vector<double> out(scores.size(), 0.0);
  for (std::size_t k = 0; k < mask.size(); ++k) out[mask[k]] = packed[k];
  return out;
}

double cross_entropy(const Matrix& probs, std::span<const int> labels,
                     std::span<const std::size_t> subset) {
  if (subset.empty()) throw InputError("cross_entropy: empty subset");
  if (labels.size() != probs.rows()) throw InputError("cross_entropy: one label per row required");
  for (std::size_t r : subset) {
    if (r >= probs.rows()) throw InputError("cross_entropy: subset row out of range");
    double sum = 0.0;
    for (std::size_t c = 0; c < probs.cols(); ++c) sum += probs(r, c);
    if (std::fabs(sum - 1.0) > 1e-6) throw InputError("cross_entropy: row does not sum to 1");
    int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= probs.cols()) {
      throw InputError("cross_entropy: label outside class range");
    }
  }
  double acc = 0.0;
  for (std::size_t r : subset) {
    double p = std::max(probs(r, static_cast<std::size_t>(labels[r])), kProbClamp);
    acc -= std::log(p);
  }
  return acc / static_cast<double>(subset.size());
}

}  // namespace urbanhealth
