#pragma once

#include <functional>
#include <vector>

#include "subdp/la.hpp"

namespace subdp::ad {

// Small eager tape for reverse-mode differentiation over dense matrices.
// Values are computed at op creation; backward() runs the tape in reverse and
// accumulates parameter gradients into caller-owned matrices.
class Graph {
 public:
  explicit Graph(bool with_grad = true) : with_grad_(with_grad) {}

  // Optional activation-pattern trace: relu() appends one sign bit per entry.
  // Two evaluations with the same graph structure produce comparable traces.
  void set_relu_trace(std::vector<unsigned char>* trace) { relu_trace_ = trace; }

  int input(Mat value);                       // constant leaf
  int param(const Mat* value, Mat* grad);     // parameter leaf; grad may be null

  // Parameter-aware ops that read the parameter in place instead of copying
  // it into the tape. grad pointers may be null for frozen parameters.
  int param_matmul(int a, const Mat* w, Mat* gw);      // value(a) * W
  int param_add_rowvec(int a, const Mat* b, Mat* gb);  // broadcast 1 x c row
  int embed_rows_sum(const Mat* table, Mat* gtable,
                     const std::vector<std::vector<int>>& row_ids);

  int matmul(int a, int b);
  int transpose(int a);
  int add(int a, int b);                      // same shape
  int add_rowvec(int a, int row);             // row: 1 x c, broadcast over rows
  int cmul(int a, int b);                     // elementwise
  int relu(int a);
  int tanh_op(int a);
  int sigmoid_op(int a);
  int concat_cols(int a, int b);
  int concat_rows(const std::vector<int>& xs);
  int slice_rows(int a, int r0, int nr);
  int slice_cols(int a, int c0, int nc);

  // Row-major vectorization of each input matrix into one column of the
  // result: out(i*cols + j, k) = mats[k](i, j). All inputs share a shape.
  int stack_vec_cols(const std::vector<int>& mats);

  int log_softmax_rows(int a);

  // Scalar node: -sum(target .* value(a)). target is fixed.
  int neg_dot(int a, Mat target);

  const Mat& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  double scalar(int id) const { return value(id)(0, 0); }

  void backward(int loss);  // loss must be 1x1

 private:
  struct Node {
    Mat value;
    Mat grad;
    std::function<void(Graph&, Node&)> back;
  };

  int push(Mat value, std::function<void(Graph&, Node&)> back);
  Mat& grad_of(int id);

  std::vector<Node> nodes_;
  bool with_grad_ = true;
  std::vector<unsigned char>* relu_trace_ = nullptr;
};

}  // namespace subdp::ad
