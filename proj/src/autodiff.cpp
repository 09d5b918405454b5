#include "autodiff.hpp"

#include <cmath>

namespace facecap::ad {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw InputError(std::string("autodiff: ") + what);
}

}  // namespace

const Tape::Node& Tape::node(Var v) const {
  require(v.valid() && v.idx < static_cast<int>(nodes_.size()), "invalid var");
  return nodes_[static_cast<std::size_t>(v.idx)];
}

Tape::Node& Tape::node(Var v) {
  require(v.valid() && v.idx < static_cast<int>(nodes_.size()), "invalid var");
  return nodes_[static_cast<std::size_t>(v.idx)];
}

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Mat& Tape::grad_of(int idx) {
  Node& n = nodes_[static_cast<std::size_t>(idx)];
  if (n.grad.rows() != n.val.rows() || n.grad.cols() != n.val.cols())
    n.grad = Mat::Zero(n.val.rows(), n.val.cols());
  return n.grad;
}

Var Tape::input(Mat value) {
  Node n;
  n.op = Op::kInput;
  n.val = std::move(value);
  return push(std::move(n));
}

Var Tape::param(const Mat* value, Mat* grad) {
  require(value != nullptr && grad != nullptr, "param needs value and grad storage");
  Node n;
  n.op = Op::kParam;
  n.val = *value;
  n.param_grad = grad;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.cols() == B.rows(), "matmul shape mismatch");
  Node n;
  n.op = Op::kMatmul;
  n.a = a.idx;
  n.b = b.idx;
  n.val.noalias() = A * B;
  return push(std::move(n));
}

Var Tape::matmul_nt(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.cols() == B.cols(), "matmul_nt shape mismatch");
  Node n;
  n.op = Op::kMatmulNT;
  n.a = a.idx;
  n.b = b.idx;
  n.val.noalias() = A * B.transpose();
  return push(std::move(n));
}

Var Tape::matmul_tn(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows(), "matmul_tn shape mismatch");
  Node n;
  n.op = Op::kMatmulTN;
  n.a = a.idx;
  n.b = b.idx;
  n.val.noalias() = A.transpose() * B;
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "add shape mismatch");
  Node n;
  n.op = Op::kAdd;
  n.a = a.idx;
  n.b = b.idx;
  n.val = A + B;
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "sub shape mismatch");
  Node n;
  n.op = Op::kSub;
  n.a = a.idx;
  n.b = b.idx;
  n.val = A - B;
  return push(std::move(n));
}

Var Tape::cmul(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "cmul shape mismatch");
  Node n;
  n.op = Op::kCMul;
  n.a = a.idx;
  n.b = b.idx;
  n.val = A.cwiseProduct(B);
  return push(std::move(n));
}

Var Tape::axpb(Var a, double alpha, double beta) {
  Node n;
  n.op = Op::kAxpb;
  n.a = a.idx;
  n.alpha = alpha;
  n.beta = beta;
  n.val = (alpha * value(a).array() + beta).matrix();
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.op = Op::kSigmoid;
  n.a = a.idx;
  n.val = (1.0 / (1.0 + (-value(a).array()).exp())).matrix();
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.op = Op::kTanh;
  n.a = a.idx;
  n.val = value(a).array().tanh().matrix();
  return push(std::move(n));
}

Var Tape::square(Var a) {
  Node n;
  n.op = Op::kSquare;
  n.a = a.idx;
  n.val = value(a).array().square().matrix();
  return push(std::move(n));
}

Var Tape::softmax(Var a) {
  const Mat& A = value(a);
  require(A.cols() == 1, "softmax expects a column vector");
  Node n;
  n.op = Op::kSoftmax;
  n.a = a.idx;
  const double m = A.maxCoeff();
  Eigen::ArrayXd e = (A.array() - m).exp();
  n.val = (e / e.sum()).matrix();
  return push(std::move(n));
}

Var Tape::log_softmax(Var a) {
  const Mat& A = value(a);
  require(A.cols() == 1, "log_softmax expects a column vector");
  Node n;
  n.op = Op::kLogSoftmax;
  n.a = a.idx;
  const double m = A.maxCoeff();
  const double lse = m + std::log((A.array() - m).exp().sum());
  n.val = (A.array() - lse).matrix();
  return push(std::move(n));
}

Var Tape::pick(Var a, int i) {
  const Mat& A = value(a);
  require(A.cols() == 1, "pick expects a column vector");
  require(i >= 0 && i < A.rows(), "pick index out of range");
  Node n;
  n.op = Op::kPick;
  n.a = a.idx;
  n.aux = i;
  n.val = Mat::Constant(1, 1, A(i, 0));
  return push(std::move(n));
}

Var Tape::dot(Var a, Var b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "dot shape mismatch");
  Node n;
  n.op = Op::kDot;
  n.a = a.idx;
  n.b = b.idx;
  n.val = Mat::Constant(1, 1, A.cwiseProduct(B).sum());
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.op = Op::kSum;
  n.a = a.idx;
  n.val = Mat::Constant(1, 1, value(a).sum());
  return push(std::move(n));
}

Var Tape::mean_rows(Var a) {
  const Mat& A = value(a);
  require(A.rows() >= 1, "mean_rows needs at least one row");
  Node n;
  n.op = Op::kMeanRows;
  n.a = a.idx;
  n.val = A.colwise().mean().transpose();
  return push(std::move(n));
}

Var Tape::add_rowvec(Var a, Var v) {
  const Mat& A = value(a);
  const Mat& V = value(v);
  require(V.cols() == 1 && V.rows() == A.cols(), "add_rowvec shape mismatch");
  Node n;
  n.op = Op::kAddRowvec;
  n.a = a.idx;
  n.b = v.idx;
  n.val = A.rowwise() + V.transpose().row(0);
  return push(std::move(n));
}

Var Tape::add_constant(Var a, Mat c) {
  const Mat& A = value(a);
  require(A.rows() == c.rows() && A.cols() == c.cols(), "add_constant shape mismatch");
  Node n;
  n.op = Op::kAddConst;
  n.a = a.idx;
  n.val = A + c;
  return push(std::move(n));
}

Var Tape::column(Var m, int j) {
  const Mat& M = value(m);
  require(j >= 0 && j < M.cols(), "column index out of range");
  Node n;
  n.op = Op::kColumn;
  n.a = m.idx;
  n.aux = j;
  n.val = M.col(j);
  return push(std::move(n));
}

double Tape::scalar(Var v) const {
  const Mat& m = value(v);
  require(m.rows() == 1 && m.cols() == 1, "scalar expects a 1x1 value");
  return m(0, 0);
}

void Tape::backward(Var output) {
  const Mat& out = value(output);
  require(out.rows() == 1 && out.cols() == 1, "backward expects a 1x1 output");
  grad_of(output.idx)(0, 0) = 1.0;

  for (int i = output.idx; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad.size() == 0) continue;  // not reachable from the output
    const Mat& g = n.grad;
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParam:
        if (n.param_grad->size() == 0)
          *n.param_grad = Mat::Zero(n.val.rows(), n.val.cols());
        *n.param_grad += g;
        break;
      case Op::kMatmul:
        grad_of(n.a).noalias() += g * nodes_[static_cast<std::size_t>(n.b)].val.transpose();
        grad_of(n.b).noalias() += nodes_[static_cast<std::size_t>(n.a)].val.transpose() * g;
        break;
      case Op::kMatmulNT:
        grad_of(n.a).noalias() += g * nodes_[static_cast<std::size_t>(n.b)].val;
        grad_of(n.b).noalias() += g.transpose() * nodes_[static_cast<std::size_t>(n.a)].val;
        break;
      case Op::kMatmulTN:
        grad_of(n.a).noalias() += nodes_[static_cast<std::size_t>(n.b)].val * g.transpose();
        grad_of(n.b).noalias() += nodes_[static_cast<std::size_t>(n.a)].val * g;
        break;
      case Op::kAdd:
        grad_of(n.a) += g;
        grad_of(n.b) += g;
        break;
      case Op::kSub:
        grad_of(n.a) += g;
        grad_of(n.b) -= g;
        break;
      case Op::kCMul:
        grad_of(n.a) += g.cwiseProduct(nodes_[static_cast<std::size_t>(n.b)].val);
        grad_of(n.b) += g.cwiseProduct(nodes_[static_cast<std::size_t>(n.a)].val);
        break;
      case Op::kAxpb:
        grad_of(n.a) += n.alpha * g;
        break;
      case Op::kSigmoid:
        grad_of(n.a).array() += g.array() * n.val.array() * (1.0 - n.val.array());
        break;
      case Op::kTanh:
        grad_of(n.a).array() += g.array() * (1.0 - n.val.array().square());
        break;
      case Op::kSquare:
        grad_of(n.a).array() +=
            2.0 * g.array() * nodes_[static_cast<std::size_t>(n.a)].val.array();
        break;
      case Op::kSoftmax: {
        const double s = n.val.cwiseProduct(g).sum();
        grad_of(n.a).array() += n.val.array() * (g.array() - s);
        break;
      }
      case Op::kLogSoftmax: {
        const double gsum = g.sum();
        grad_of(n.a).array() += g.array() - n.val.array().exp() * gsum;
        break;
      }
      case Op::kPick:
        grad_of(n.a)(n.aux, 0) += g(0, 0);
        break;
      case Op::kDot:
        grad_of(n.a) += g(0, 0) * nodes_[static_cast<std::size_t>(n.b)].val;
        grad_of(n.b) += g(0, 0) * nodes_[static_cast<std::size_t>(n.a)].val;
        break;
      case Op::kSum:
        grad_of(n.a).array() += g(0, 0);
        break;
      case Op::kMeanRows: {
        const double inv = 1.0 / static_cast<double>(nodes_[static_cast<std::size_t>(n.a)].val.rows());
        grad_of(n.a).rowwise() += inv * g.transpose().row(0);
        break;
      }
      case Op::kAddRowvec:
        grad_of(n.a) += g;
        grad_of(n.b) += g.colwise().sum().transpose();
        break;
      case Op::kAddConst:
        grad_of(n.a) += g;
        break;
      case Op::kColumn:
        grad_of(n.a).col(n.aux) += g.col(0);
        break;
    }
  }
}

void Tape::reset() { nodes_.clear(); }

}  // namespace facecap::ad
