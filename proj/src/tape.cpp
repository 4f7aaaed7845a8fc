#include "urbanhealth/tape.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "urbanhealth/errors.hpp"
#include "urbanhealth/numerics.hpp"

namespace urbanhealth {

Tape::Id Tape::push(Matrix value, std::function<void(Tape&, Id)> backprop) {
  nodes_.push_back(Node{std::move(value), Matrix{}, std::move(backprop)});
  return nodes_.size() - 1;
}

Tape::Id Tape::leaf(Matrix value) { return push(std::move(value), nullptr); }

void Tape::backward(Id root) {
  const Matrix& rv = nodes_[root].value;
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw InternalError("backward: root must be a scalar");
  }
  for (Node& n : nodes_) n.grad = Matrix(n.value.rows(), n.value.cols());
  nodes_[root].grad(0, 0) = 1.0;
  for (std::size_t i = root + 1; i-- > 0;) {
    if (nodes_[i].backprop) nodes_[i].backprop(*this, i);
  }
}

Tape::Id Tape::matmul(Id a, Id b) {
  Matrix out = Matrix::matmul(value(a), value(b));
  return push(std::move(out), [a, b](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    t.grad_ref(a).add_in_place(Matrix::matmul_nt(g, t.value(b)));
    t.grad_ref(b).add_in_place(Matrix::matmul_tn(t.value(a), g));
  });
}

Tape::Id Tape::transpose(Id a) {
  return push(value(a).transposed(), [a](Tape& t, Id self) {
    t.grad_ref(a).add_in_place(t.grad(self).transposed());
  });
}

Tape::Id Tape::add(Id a, Id b) {
  return push(value(a) + value(b), [a, b](Tape& t, Id self) {
    t.grad_ref(a).add_in_place(t.grad(self));
    t.grad_ref(b).add_in_place(t.grad(self));
  });
}

Tape::Id Tape::sum_all(Id a) {
  const Matrix& m = value(a);
  Matrix out(1, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m.data()[i];
  out(0, 0) = acc;
  return push(std::move(out), [a](Tape& t, Id self) {
    const double g = t.grad(self)(0, 0);
    Matrix& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
  });
}

Tape::Id Tape::scale(Id a, double c) {
  return push(c * value(a), [a, c](Tape& t, Id self) {
    t.grad_ref(a).add_in_place(c * t.grad(self));
  });
}

Tape::Id Tape::slice_rows(Id a, std::size_t begin, std::size_t count) {
  const Matrix& src = value(a);
  if (begin + count > src.rows()) throw InternalError("slice_rows: range out of bounds");
  Matrix out(count, src.cols());
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < src.cols(); ++c) out(r, c) = src(begin + r, c);
  return push(std::move(out), [a, begin, count](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_ref(a);
    for (std::size_t r = 0; r < count; ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(begin + r, c) += g(r, c);
  });
}

Tape::Id Tape::concat_cols(std::span<const Id> parts) {
  if (parts.empty()) throw InternalError("concat_cols: no inputs");
  const std::size_t rows = value(parts[0]).rows();
  std::size_t total_cols = 0;
  for (Id p : parts) {
    if (value(p).rows() != rows) throw InternalError("concat_cols: row mismatch");
    total_cols += value(p).cols();
  }
  Matrix out(rows, total_cols);
  std::size_t at = 0;
  for (Id p : parts) {
    const Matrix& m = value(p);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, at + c) = m(r, c);
    at += m.cols();
  }
  std::vector<Id> owned(parts.begin(), parts.end());
  return push(std::move(out), [owned = std::move(owned)](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    std::size_t at = 0;
    for (Id p : owned) {
      Matrix& gp = t.grad_ref(p);
      for (std::size_t r = 0; r < gp.rows(); ++r)
        for (std::size_t c = 0; c < gp.cols(); ++c) gp(r, c) += g(r, at + c);
      at += gp.cols();
    }
  });
}

Tape::Id Tape::leaky_relu(Id a, double slope) {
  Matrix out = urbanhealth::leaky_relu(value(a), slope);
  return push(std::move(out), [a, slope](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    const Matrix& x = t.value(a);
    Matrix& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga.data()[i] += g.data()[i] * (x.data()[i] >= 0.0 ? 1.0 : slope);
    }
  });
}

Tape::Id Tape::elu(Id a) {
  Matrix out = urbanhealth::elu(value(a));
  return push(std::move(out), [a](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    const Matrix& y = t.value(self);
    Matrix& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      // d elu / dx = 1 for x >= 0, exp(x) = y + 1 below
      double d = y.data()[i] >= 0.0 ? 1.0 : y.data()[i] + 1.0;
      ga.data()[i] += g.data()[i] * d;
    }
  });
}

Tape::Id Tape::softmax_rows(Id a) {
  const Matrix& x = value(a);
  if (!x.all_finite()) throw InternalError("softmax_rows: non-finite input");
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    segment_softmax_in_place(out.data(), r * out.cols(), (r + 1) * out.cols());
  }
  return push(std::move(out), [a](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    const Matrix& p = t.value(self);
    Matrix& ga = t.grad_ref(a);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < p.cols(); ++c) dot += p(r, c) * g(r, c);
      for (std::size_t c = 0; c < p.cols(); ++c) {
        ga(r, c) += p(r, c) * (g(r, c) - dot);
      }
    }
  });
}

Tape::Id Tape::cross_entropy(Id probs, std::span<const int> labels,
                             std::span<const std::size_t> subset) {
  double loss = urbanhealth::cross_entropy(value(probs), labels, subset);
  Matrix out(1, 1);
  out(0, 0) = loss;
  std::vector<int> y(labels.begin(), labels.end());
  std::vector<std::size_t> rows(subset.begin(), subset.end());
  return push(std::move(out), [probs, y = std::move(y), rows = std::move(rows)](
                                  Tape& t, Id self) {
    const double g = t.grad(self)(0, 0);
    const Matrix& p = t.value(probs);
    Matrix& gp = t.grad_ref(probs);
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (std::size_t r : rows) {
      std::size_t c = static_cast<std::size_t>(y[r]);
      // clamped probabilities sit on a flat spot; their gradient is zero
      if (p(r, c) > kProbClamp) gp(r, c) -= g * inv / p(r, c);
    }
  });
}

Tape::Id Tape::edge_scores(Id src, Id dst, std::span<const std::size_t> offsets,
                           std::span<const int> cols) {
  const Matrix& s = value(src);
  const Matrix& d = value(dst);
  const std::size_t n = offsets.size() - 1;
  if (s.rows() != n || s.cols() != 1 || d.rows() != n || d.cols() != 1) {
    throw InternalError("edge_scores: expected n x 1 score columns");
  }
  Matrix out(cols.size(), 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      out(k, 0) = s(i, 0) + d(static_cast<std::size_t>(cols[k]), 0);
    }
  }
  return push(std::move(out), [src, dst, offsets, cols](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    Matrix& gs = t.grad_ref(src);
    Matrix& gd = t.grad_ref(dst);
    const std::size_t n = offsets.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        gs(i, 0) += g(k, 0);
        gd(static_cast<std::size_t>(cols[k]), 0) += g(k, 0);
      }
    }
  });
}

Tape::Id Tape::neighborhood_softmax(Id edge_vals, std::span<const std::size_t> offsets) {
  Matrix out = value(edge_vals);
  if (out.cols() != 1) throw InternalError("neighborhood_softmax: expected a column");
  if (!out.all_finite()) throw InternalError("neighborhood_softmax: non-finite scores");
  const std::size_t n = offsets.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    segment_softmax_in_place(out.data(), offsets[i], offsets[i + 1]);
  }
  return push(std::move(out), [edge_vals, offsets](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    const Matrix& alpha = t.value(self);
    Matrix& ge = t.grad_ref(edge_vals);
    const std::size_t n = offsets.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        dot += alpha(k, 0) * g(k, 0);
      }
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        ge(k, 0) += alpha(k, 0) * (g(k, 0) - dot);
      }
    }
  });
}

Tape::Id Tape::neighborhood_aggregate(Id alpha, Id z,
                                      std::span<const std::size_t> offsets,
                                      std::span<const int> cols) {
  const Matrix& a = value(alpha);
  const Matrix& zm = value(z);
  const std::size_t n = offsets.size() - 1;
  if (a.rows() != cols.size() || a.cols() != 1) {
    throw InternalError("neighborhood_aggregate: alpha must be one value per edge slot");
  }
  if (zm.rows() != n) throw InternalError("neighborhood_aggregate: z row count mismatch");
  Matrix out(n, zm.cols());
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.data() + i * out.cols();
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      const double w = a(k, 0);
      const double* zrow = zm.data() + static_cast<std::size_t>(cols[k]) * zm.cols();
      for (std::size_t c = 0; c < zm.cols(); ++c) orow[c] += w * zrow[c];
    }
  }
  return push(std::move(out), [alpha, z, offsets, cols](Tape& t, Id self) {
    const Matrix& g = t.grad(self);
    const Matrix& a = t.value(alpha);
    const Matrix& zm = t.value(z);
    Matrix& ga = t.grad_ref(alpha);
    Matrix& gz = t.grad_ref(z);
    const std::size_t n = offsets.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double* grow = g.data() + i * g.cols();
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const std::size_t j = static_cast<std::size_t>(cols[k]);
        const double* zrow = zm.data() + j * zm.cols();
        double* gzrow = gz.data() + j * gz.cols();
        double acc = 0.0;
        const double w = a(k, 0);
        for (std::size_t c = 0; c < g.cols(); ++c) {
          acc += grow[c] * zrow[c];
          gzrow[c] += w * grow[c];
        }
        ga(k, 0) += acc;
      }
    }
  });
}

}  // namespace urbanhealth
