#include "subdp/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace subdp::ad {

int Graph::push(Mat value, std::function<void(Graph&, Node&)> back) {
  Node n;
  n.value = std::move(value);
  if (with_grad_) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Mat& Graph::grad_of(int id) {
  Node& n = nodes_[static_cast<size_t>(id)];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

int Graph::input(Mat value) {
  return push(std::move(value), {});
}

int Graph::param(const Mat* value, Mat* grad) {
  return push(*value, [grad](Graph&, Node& self) {
    if (grad != nullptr) *grad += self.grad;
  });
}

int Graph::param_matmul(int a, const Mat* w, Mat* gw) {
  Mat v = value(a) * (*w);
  return push(std::move(v), [a, w, gw](Graph& g, Node& self) {
    g.grad_of(a).noalias() += self.grad * w->transpose();
    if (gw != nullptr) gw->noalias() += g.value(a).transpose() * self.grad;
  });
}

int Graph::param_add_rowvec(int a, const Mat* b, Mat* gb) {
  Mat v = value(a);
  v.rowwise() += b->row(0);
  return push(std::move(v), [a, gb](Graph& g, Node& self) {
    g.grad_of(a) += self.grad;
    if (gb != nullptr) *gb += self.grad.colwise().sum();
  });
}

int Graph::embed_rows_sum(const Mat* table, Mat* gtable,
                          const std::vector<std::vector<int>>& row_ids) {
  Mat v = Mat::Zero(static_cast<Eigen::Index>(row_ids.size()), table->cols());
  for (size_t w = 0; w < row_ids.size(); ++w) {
    for (int r : row_ids[w]) v.row(static_cast<Eigen::Index>(w)) += table->row(r);
  }
  return push(std::move(v), [gtable, row_ids](Graph&, Node& self) {
    if (gtable == nullptr) return;
    for (size_t w = 0; w < row_ids.size(); ++w) {
      for (int r : row_ids[w]) gtable->row(r) += self.grad.row(static_cast<Eigen::Index>(w));
    }
  });
}

int Graph::matmul(int a, int b) {
  Mat v = value(a) * value(b);
  return push(std::move(v), [a, b](Graph& g, Node& self) {
    g.grad_of(a).noalias() += self.grad * g.value(b).transpose();
    g.grad_of(b).noalias() += g.value(a).transpose() * self.grad;
  });
}

int Graph::transpose(int a) {
  return push(value(a).transpose(), [a](Graph& g, Node& self) {
    g.grad_of(a) += self.grad.transpose();
  });
}

int Graph::add(int a, int b) {
  return push(value(a) + value(b), [a, b](Graph& g, Node& self) {
    g.grad_of(a) += self.grad;
    g.grad_of(b) += self.grad;
  });
}

int Graph::add_rowvec(int a, int row) {
  Mat v = value(a);
  v.rowwise() += value(row).row(0);
  return push(std::move(v), [a, row](Graph& g, Node& self) {
    g.grad_of(a) += self.grad;
    g.grad_of(row) += self.grad.colwise().sum();
  });
}

int Graph::cmul(int a, int b) {
  return push(value(a).cwiseProduct(value(b)), [a, b](Graph& g, Node& self) {
    g.grad_of(a) += self.grad.cwiseProduct(g.value(b));
    g.grad_of(b) += self.grad.cwiseProduct(g.value(a));
  });
}

int Graph::relu(int a) {
  if (relu_trace_ != nullptr) {
    const Mat& x = value(a);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) relu_trace_->push_back(x(i, j) > 0.0 ? 1 : 0);
    }
  }
  return push(value(a).cwiseMax(0.0), [a](Graph& g, Node& self) {
    g.grad_of(a) += self.grad.cwiseProduct(
        (g.value(a).array() > 0.0).cast<double>().matrix());
  });
}

int Graph::tanh_op(int a) {
  Mat v = value(a).array().tanh().matrix();
  return push(std::move(v), [a](Graph& g, Node& self) {
    g.grad_of(a).array() += self.grad.array() * (1.0 - self.value.array().square());
  });
}

int Graph::sigmoid_op(int a) {
  Mat v = (1.0 / (1.0 + (-value(a).array()).exp())).matrix();
  return push(std::move(v), [a](Graph& g, Node& self) {
    g.grad_of(a).array() += self.grad.array() * self.value.array() * (1.0 - self.value.array());
  });
}

int Graph::concat_cols(int a, int b) {
  const Mat& va = value(a);
  const Mat& vb = value(b);
  Mat v(va.rows(), va.cols() + vb.cols());
  v << va, vb;
  const Eigen::Index ca = va.cols();
  return push(std::move(v), [a, b, ca](Graph& g, Node& self) {
    g.grad_of(a) += self.grad.leftCols(ca);
    g.grad_of(b) += self.grad.rightCols(self.grad.cols() - ca);
  });
}

int Graph::concat_rows(const std::vector<int>& xs) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = value(xs.front()).cols();
  for (int x : xs) rows += value(x).rows();
  Mat v(rows, cols);
  Eigen::Index r = 0;
  for (int x : xs) {
    v.middleRows(r, value(x).rows()) = value(x);
    r += value(x).rows();
  }
  return push(std::move(v), [xs](Graph& g, Node& self) {
    Eigen::Index r = 0;
    for (int x : xs) {
      const Eigen::Index nr = g.value(x).rows();
      g.grad_of(x) += self.grad.middleRows(r, nr);
      r += nr;
    }
  });
}

int Graph::slice_rows(int a, int r0, int nr) {
  return push(value(a).middleRows(r0, nr), [a, r0, nr](Graph& g, Node& self) {
    g.grad_of(a).middleRows(r0, nr) += self.grad;
  });
}

int Graph::slice_cols(int a, int c0, int nc) {
  return push(value(a).middleCols(c0, nc), [a, c0, nc](Graph& g, Node& self) {
    g.grad_of(a).middleCols(c0, nc) += self.grad;
  });
}

int Graph::stack_vec_cols(const std::vector<int>& mats) {
  const Eigen::Index r = value(mats.front()).rows();
  const Eigen::Index c = value(mats.front()).cols();
  Mat v(r * c, static_cast<Eigen::Index>(mats.size()));
  for (size_t k = 0; k < mats.size(); ++k) {
    const Mat& m = value(mats[k]);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) v(i * c + j, static_cast<Eigen::Index>(k)) = m(i, j);
    }
  }
  return push(std::move(v), [mats, r, c](Graph& g, Node& self) {
    for (size_t k = 0; k < mats.size(); ++k) {
      Mat& gm = g.grad_of(mats[k]);
      for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
          gm(i, j) += self.grad(i * c + j, static_cast<Eigen::Index>(k));
        }
      }
    }
  });
}

int Graph::log_softmax_rows(int a) {
  const Mat& x = value(a);
  Mat v(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mx = x.row(i).maxCoeff();
    const double lse = mx + std::log((x.row(i).array() - mx).exp().sum());
    v.row(i) = x.row(i).array() - lse;
  }
  return push(std::move(v), [a](Graph& g, Node& self) {
    // dx = dy - softmax .* rowsum(dy)
    for (Eigen::Index i = 0; i < self.grad.rows(); ++i) {
      const double s = self.grad.row(i).sum();
      g.grad_of(a).row(i).array() +=
          self.grad.row(i).array() - self.value.row(i).array().exp() * s;
    }
  });
}

int Graph::neg_dot(int a, Mat target) {
  const double v = -(value(a).cwiseProduct(target)).sum();
  Mat out(1, 1);
  out(0, 0) = v;
  return push(std::move(out), [a, target = std::move(target)](Graph& g, Node& self) {
    g.grad_of(a) -= self.grad(0, 0) * target;
  });
}

void Graph::backward(int loss) {
  if (!with_grad_) throw std::logic_error("backward() on a forward-only graph");
  Node& top = nodes_[static_cast<size_t>(loss)];
  if (top.value.rows() != 1 || top.value.cols() != 1) {
    throw std::logic_error("backward() requires a scalar loss node");
  }
  grad_of(loss)(0, 0) = 1.0;
  for (int id = loss; id >= 0; --id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (n.back && n.grad.size() != 0) n.back(*this, n);
  }
}

}  // namespace subdp::ad
