#include "bayesdl/nnet/activation.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::nnet {

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
    case Activation::heaviside: return "heaviside";
  }
  return "identity";
}

Activation activation_from_string(std::string_view tag) {
  for (auto act : {Activation::identity, Activation::relu, Activation::tanh, Activation::sigmoid,
                   Activation::softmax, Activation::heaviside}) {
    if (to_string(act) == tag) return act;
  }
  throw InputFormatError("unknown activation '" + std::string(tag) + "'");
}

Real activate_scalar(Activation act, Real x) {
  switch (act) {
    case Activation::identity: return x;
    case Activation::relu: return x > 0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::heaviside: return x > 0 ? 1.0 : 0.0;
    case Activation::softmax: break;
  }
  throw ShapeError("softmax is not an elementwise activation");
}

Matrix log_softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index j = 0; j < logits.cols(); ++j) {
    const Real m = logits.col(j).maxCoeff();
    const Real lse = m + std::log((logits.col(j).array() - m).exp().sum());
    out.col(j) = logits.col(j).array() - lse;
  }
  return out;
}

Matrix activate(Activation act, const Matrix& pre) {
  if (act == Activation::softmax) {
    Matrix out = log_softmax(pre).array().exp().matrix();
    // renormalize so every column sums to one to the last bit available
    for (Index j = 0; j < out.cols(); ++j) out.col(j) /= out.col(j).sum();
    return out;
  }
  return pre.unaryExpr([act](Real x) { return activate_scalar(act, x); });
}

Matrix activation_derivative(Activation act, const Matrix& pre, const Matrix& post) {
  switch (act) {
    case Activation::identity: return Matrix::Ones(pre.rows(), pre.cols());
    case Activation::relu: return (pre.array() > 0).cast<Real>().matrix();
    case Activation::tanh: return (1.0 - post.array().square()).matrix();
    case Activation::sigmoid: return (post.array() * (1.0 - post.array())).matrix();
    case Activation::softmax:
      throw ShapeError("softmax derivative is a Jacobian, not elementwise");
    case Activation::heaviside:
      throw UnsupportedGradientError("heaviside activation has no gradient");
  }
  return {};
}

}  // namespace bayesdl::nnet
