#pragma once

#include <functional>
#include <span>
#include <vector>

#include "urbanhealth/matrix.hpp"

namespace urbanhealth {

// Reverse-mode gradient tape over Matrix values. A forward pass records one
// node per primitive; backward() replays the records in reverse and
// accumulates gradients. Leaves created from parameters keep their gradient
// matrices (zero if the parameter never fed the root).
//
// The neighborhood-structured ops take CSR spans (offsets of size n+1 and a
// flat neighbor-index array); the spans are captured, not copied, so the
// adjacency they point into must outlive the tape.
class Tape {
 public:
  using Id = std::size_t;

  Id leaf(Matrix value);

  const Matrix& value(Id id) const { return nodes_[id].value; }
  // valid after backward(); zero matrix for ids the root never depended on
  const Matrix& grad(Id id) const { return nodes_[id].grad; }
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(root) = 1 (root must be 1x1) and accumulates into every node.
  void backward(Id root);

  Id matmul(Id a, Id b);
  Id transpose(Id a);
  Id add(Id a, Id b);
  // sum of every entry, as a 1x1 matrix
  Id sum_all(Id a);
  Id scale(Id a, double c);
  Id slice_rows(Id a, std::size_t begin, std::size_t count);
  Id concat_cols(std::span<const Id> parts);
  Id leaky_relu(Id a, double slope);
  Id elu(Id a);
  Id softmax_rows(Id a);
  Id cross_entropy(Id probs, std::span<const int> labels,
                   std::span<const std::size_t> subset);

  // score[k] = src[row(k)] + dst[col(k)] for every CSR slot k; src and dst
  // are n x 1 columns.
  Id edge_scores(Id src, Id dst, std::span<const std::size_t> offsets,
                 std::span<const int> cols);
  // masked softmax of per-edge scores within each node's CSR segment
  Id neighborhood_softmax(Id edge_vals, std::span<const std::size_t> offsets);
  // out[i,:] = sum over CSR slots k of row i of alpha[k] * z[col(k),:]
  Id neighborhood_aggregate(Id alpha, Id z, std::span<const std::size_t> offsets,
                            std::span<const int> cols);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&, Id)> backprop;
  };

  Id push(Matrix value, std::function<void(Tape&, Id)> backprop);
  Matrix& grad_ref(Id id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
};

}  // namespace urbanhealth
