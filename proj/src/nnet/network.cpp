#include "bayesdl/nnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/nnet/loss.hpp"

namespace bayesdl::nnet {

Network::Network(Index input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ < 1) throw ShapeError("network input dimension must be positive");
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  Index expected = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.W.cols() != expected)
      throw ShapeError("layer " + std::to_string(l) + " expects input " +
                       std::to_string(layer.W.cols()) + ", previous output is " +
                       std::to_string(expected));
    if (layer.W.rows() != layer.b.size())
      throw ShapeError("layer " + std::to_string(l) + ": W rows differ from bias length");
    if (layer.act == Activation::softmax && l + 1 != layers_.size())
      throw ShapeError("softmax is only legal as the final activation");
    expected = layer.W.rows();
  }
}

Index Network::parameter_count() const {
  Index n = 0;
  for (const auto& layer : layers_) n += layer.W.size() + layer.b.size();
  return n;
}

Vector Network::parameters() const {
  Vector flat(parameter_count());
  Index k = 0;
  for (const auto& layer : layers_) {
    for (Index i = 0; i < layer.W.rows(); ++i)
      for (Index j = 0; j < layer.W.cols(); ++j) flat[k++] = layer.W(i, j);
    for (Index i = 0; i < layer.b.size(); ++i) flat[k++] = layer.b[i];
  }
  return flat;
}

void Network::set_parameters(const Vector& flat) {
  if (flat.size() != parameter_count()) throw ShapeError("parameter vector has the wrong length");
  Index k = 0;
  for (auto& layer : layers_) {
    for (Index i = 0; i < layer.W.rows(); ++i)
      for (Index j = 0; j < layer.W.cols(); ++j) layer.W(i, j) = flat[k++];
    for (Index i = 0; i < layer.b.size(); ++i) layer.b[i] = flat[k++];
  }
}

bool Network::differentiable() const {
  return std::none_of(layers_.begin(), layers_.end(),
                      [](const Layer& l) { return l.act == Activation::heaviside; });
}

Network make_network(Index input_dim, const std::vector<LayerSpec>& specs, Rng& rng) {
  std::vector<Layer> layers;
  Index fan_in = input_dim;
  for (const auto& spec : specs) {
    Layer layer;
    layer.act = spec.act;
    layer.W.resize(spec.units, fan_in);
    const Real scale = 1.0 / std::sqrt(static_cast<Real>(fan_in));
    for (Index i = 0; i < layer.W.rows(); ++i)
      for (Index j = 0; j < layer.W.cols(); ++j) layer.W(i, j) = scale * rng.std_normal();
    layer.b = Vector::Zero(spec.units);
    layers.push_back(std::move(layer));
    fan_in = spec.units;
  }
  return Network(input_dim, std::move(layers));
}

ForwardResult forward(const Network& net, const Matrix& X) {
  if (X.rows() != net.input_dim())
    throw ShapeError("forward: input has " + std::to_string(X.rows()) + " rows, network expects " +
                     std::to_string(net.input_dim()));
  ForwardResult result;
  result.cache.post.reserve(net.depth() + 1);
  result.cache.pre.reserve(net.depth());
  result.cache.post.push_back(X);
  for (const auto& layer : net.layers()) {
    Matrix pre = layer.W * result.cache.post.back();
    pre.colwise() += layer.b;
    result.cache.post.push_back(activate(layer.act, pre));
    result.cache.pre.push_back(std::move(pre));
  }
  result.output = result.cache.post.back();
  return result;
}

Matrix predict(const Network& net, const Matrix& X) {
  if (X.rows() != net.input_dim()) throw ShapeError("predict: input dimension mismatch");
  Matrix z = X;
  for (const auto& layer : net.layers()) {
    Matrix pre = layer.W * z;
    pre.colwise() += layer.b;
    z = activate(layer.act, pre);
  }
  return z;
}

namespace {

void check_targets(const Network& net, const Matrix& X, const Matrix& Y, LossKind loss) {
  if (Y.rows() != net.output_dim() || Y.cols() != X.cols())
    throw ShapeError("targets do not match the network output shape");
  if (loss == LossKind::cross_entropy) {
    if (net.layers().back().act != Activation::softmax)
      throw InputFormatError("cross-entropy loss requires a softmax output layer");
    require_one_hot(Y);
  }
}

Real cross_entropy_from_logits(const Matrix& logits, const Matrix& Y) {
  const Matrix logp = log_softmax(logits);
  return -(Y.array() * logp.array()).sum();
}

}  // namespace

Real data_loss(const Network& net, const Matrix& X, const Matrix& Y, LossKind loss) {
  check_targets(net, X, Y, loss);
  const ForwardResult fr = forward(net, X);
  if (loss == LossKind::cross_entropy) return cross_entropy_from_logits(fr.cache.pre.back(), Y);
  return l2_loss(fr.output, Y);
}

Real penalty_value(const Network& net, const Penalty& penalty) {
  if (penalty.lambda < 0) throw DomainError("penalty lambda must be nonnegative");
  if (penalty.kind == PenaltyKind::none || penalty.lambda == 0) return 0.0;
  Real phi = 0;
  for (const auto& layer : net.layers()) {
    if (penalty.kind == PenaltyKind::l2) {
      phi += layer.W.squaredNorm() + layer.b.squaredNorm();
    } else {
      phi += layer.W.cwiseAbs().sum() + layer.b.cwiseAbs().sum();
    }
  }
  return penalty.lambda * phi;
}

Real objective(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec) {
  return data_loss(net, X, Y, spec.loss) + penalty_value(net, spec.penalty);
}

Vector Gradients::flat() const {
  Index n = 0;
  for (std::size_t l = 0; l < dW.size(); ++l) n += dW[l].size() + db[l].size();
  Vector out(n);
  Index k = 0;
  for (std::size_t l = 0; l < dW.size(); ++l) {
    for (Index i = 0; i < dW[l].rows(); ++i)
      for (Index j = 0; j < dW[l].cols(); ++j) out[k++] = dW[l](i, j);
    for (Index i = 0; i < db[l].size(); ++i) out[k++] = db[l][i];
  }
  return out;
}

Gradients penalty_gradient(const Network& net, const Penalty& penalty) {
  Gradients g;
  for (const auto& layer : net.layers()) {
    if (penalty.kind == PenaltyKind::none || penalty.lambda == 0) {
      g.dW.push_back(Matrix::Zero(layer.W.rows(), layer.W.cols()));
      g.db.push_back(Vector::Zero(layer.b.size()));
    } else if (penalty.kind == PenaltyKind::l2) {
      g.dW.push_back(2.0 * penalty.lambda * layer.W);
      g.db.push_back(2.0 * penalty.lambda * layer.b);
    } else {
      const auto sgn = [](Real v) { return static_cast<Real>((v > 0) - (v < 0)); };
      g.dW.push_back(penalty.lambda * layer.W.unaryExpr(sgn));
      g.db.push_back(penalty.lambda * layer.b.unaryExpr(sgn));
    }
  }
  return g;
}

Gradients backprop(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec) {
  if (!net.differentiable())
    throw UnsupportedGradientError("backprop: network contains a heaviside layer");
  check_targets(net, X, Y, spec.loss);
  const ForwardResult fr = forward(net, X);
  const auto& layers = net.layers();
  const std::size_t L = layers.size();

  // delta = d objective / d pre-activation of the last layer
  Matrix delta;
  const Layer& last = layers.back();
  if (spec.loss == LossKind::cross_entropy) {
    delta = fr.output - Y;
  } else {
    const Matrix g = 2.0 * (fr.output - Y);
    if (last.act == Activation::softmax) {
      const Matrix& p = fr.output;
      delta = p.array() * (g.array().rowwise() - (p.array() * g.array()).colwise().sum());
    } else {
      delta = g.cwiseProduct(activation_derivative(last.act, fr.cache.pre.back(), fr.output));
    }
  }

  Gradients grads = penalty_gradient(net, spec.penalty);
  for (std::size_t l = L; l-- > 0;) {
    grads.dW[l] += delta * fr.cache.post[l].transpose();
    grads.db[l] += delta.rowwise().sum();
    if (l > 0) {
      Matrix back = layers[l].W.transpose() * delta;
      delta = back.cwiseProduct(
          activation_derivative(layers[l - 1].act, fr.cache.pre[l - 1], fr.cache.post[l]));
    }
  }
  return grads;
}

Real grad_check(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec) {
  if (net.parameter_count() > 2000) throw DomainError("grad_check is limited to 2000 parameters");
  const Vector analytic = backprop(net, X, Y, spec).flat();
  const Vector theta = net.parameters();
  Network probe = net;
  const Real h0 = std::cbrt(std::numeric_limits<Real>::epsilon());
  Real worst = 0;
  for (Index i = 0; i < theta.size(); ++i) {
    const Real h = h0 * std::max(Real(1), std::abs(theta[i]));
    Vector t = theta;
    t[i] = theta[i] + h;
    probe.set_parameters(t);
    const Real up = objective(probe, X, Y, spec);
    t[i] = theta[i] - h;
    probe.set_parameters(t);
    const Real down = objective(probe, X, Y, spec);
    const Real numeric = (up - down) / (2 * h);
    const Real err = std::abs(analytic[i] - numeric) /
                     std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace bayesdl::nnet
