#ifndef FACECAP_AUTODIFF_HPP_
#define FACECAP_AUTODIFF_HPP_

#include <Eigen/Core>
#include <vector>

#include "common.hpp"

namespace facecap::ad {

using Mat = Eigen::MatrixXd;

struct Var {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

// Reverse-mode tape over dense matrices. Values are computed eagerly when an
// op is recorded; backward() runs one reverse sweep and accumulates parameter
// gradients into the external matrices registered via param().
//
// Column vectors are plain n-by-1 matrices; softmax/log_softmax/pick operate
// on those.
class Tape {
 public:
  Var input(Mat value);
  Var param(const Mat* value, Mat* grad);

  Var matmul(Var a, Var b);     // a * b
  Var matmul_nt(Var a, Var b);  // a * b^T
  Var matmul_tn(Var a, Var b);  // a^T * b
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var cmul(Var a, Var b);           // elementwise
  Var axpb(Var a, double alpha, double beta);  // alpha*a + beta, elementwise
  Var scale(Var a, double alpha) { return axpb(a, alpha, 0.0); }
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var square(Var a);
  Var softmax(Var a);      // column vector
  Var log_softmax(Var a);  // column vector, computed via log-sum-exp
  Var pick(Var a, int i);  // element i of a column vector, as 1x1
  Var dot(Var a, Var b);   // sum of elementwise product, as 1x1
  Var sum(Var a);          // 1x1
  Var mean_rows(Var a);    // KxD -> Dx1 column of per-column means
  Var add_rowvec(Var a, Var v);  // KxH plus v (Hx1) broadcast over rows
  Var add_constant(Var a, Mat c);
  Var column(Var m, int j);  // MxV -> Mx1 (embedding lookup)

  const Mat& value(Var v) const { return node(v).val; }
  double scalar(Var v) const;

  // Reverse sweep from a 1x1 output. May be called once per recorded graph.
  void backward(Var output);

  void reset();  // drop all nodes, keep capacity
  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    kInput, kParam, kMatmul, kMatmulNT, kMatmulTN, kAdd, kSub, kCMul, kAxpb,
    kSigmoid, kTanh, kSquare, kSoftmax, kLogSoftmax, kPick, kDot, kSum,
    kMeanRows, kAddRowvec, kAddConst, kColumn
  };

  struct Node {
    Op op;
    int a = -1, b = -1;
    int aux = 0;
    double alpha = 0.0, beta = 0.0;
    Mat val;
    Mat grad;          // lazily sized during backward
    Mat* param_grad = nullptr;
  };

  const Node& node(Var v) const;
  Node& node(Var v);
  Var push(Node n);
  Mat& grad_of(int idx);

  std::vector<Node> nodes_;
};

}  // namespace facecap::ad

#endif  // FACECAP_AUTODIFF_HPP_
