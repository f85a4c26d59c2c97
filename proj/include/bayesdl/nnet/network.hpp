#pragma once

#include <cstdint>
#include <vector>

#include "bayesdl/core/rng.hpp"
#include "bayesdl/core/types.hpp"
#include "bayesdl/nnet/activation.hpp"

namespace bayesdl::nnet {

// Observations are stored as COLUMNS throughout nnet: a batch X has
// input_dim rows and one column per observation, so a layer computes
// f(W X + b). The tabular data module stores records as rows and
// transposes at the boundary.

struct Layer {
  Matrix W;  // out x in
  Vector b;  // out
  Activation act = Activation::relu;

  Index in_dim() const { return W.cols(); }
  Index out_dim() const { return W.rows(); }
};

struct LayerSpec {
  Index units;
  Activation act;
};

/// Ordered stack of semi-affine layers. Construction validates that the
/// dimensions chain and that softmax only appears in the last layer.
class Network {
 public:
  Network(Index input_dim, std::vector<Layer> layers);

  Index input_dim() const { return input_dim_; }
  Index output_dim() const { return layers_.back().out_dim(); }
  std::size_t depth() const { return layers_.size(); }
  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(std::size_t i) const { return layers_.at(i); }

  Index parameter_count() const;
  /// Flat parameter vector: per layer, W in row-major order followed by b.
  Vector parameters() const;
  void set_parameters(const Vector& flat);

  bool differentiable() const;

 private:
  Index input_dim_;
  std::vector<Layer> layers_;
};

/// Weights ~ Normal(0, 1/fan_in), biases zero.
Network make_network(Index input_dim, const std::vector<LayerSpec>& specs, Rng& rng);

struct ForwardCache {
  std::vector<Matrix> pre;   // W z + b per layer
  std::vector<Matrix> post;  // post[0] = X, post[l+1] = f(pre[l])
};

struct ForwardResult {
  Matrix output;
  ForwardCache cache;
};

ForwardResult forward(const Network& net, const Matrix& X);
/// Output only, without keeping the cache.
Matrix predict(const Network& net, const Matrix& X);

enum class LossKind { l2, cross_entropy };
enum class PenaltyKind { none, l2, l1 };

struct Penalty {
  PenaltyKind kind = PenaltyKind::none;
  Real lambda = 0.0;
};

struct LossSpec {
  LossKind loss = LossKind::l2;
  Penalty penalty{};
};

/// Per-layer gradients with the same shapes as the parameters.
struct Gradients {
  std::vector<Matrix> dW;
  std::vector<Vector> db;

  /// Flattened in the order of Network::parameters().
  Vector flat() const;
};

/// Sum over observations of the loss; no penalty.
Real data_loss(const Network& net, const Matrix& X, const Matrix& Y, LossKind loss);
/// lambda * phi(W, b), phi summing squared (l2) or absolute (l1) entries of all weights and biases.
Real penalty_value(const Network& net, const Penalty& penalty);
/// Negative log-posterior: data loss plus penalty.
Real objective(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec);

/// Reverse-mode gradient of objective(). Throws UnsupportedGradientError for heaviside layers.
Gradients backprop(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec);
Gradients penalty_gradient(const Network& net, const Penalty& penalty);

/// Max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|),
/// numeric by central differences with step 1e-6. At most 2000 parameters.
Real grad_check(const Network& net, const Matrix& X, const Matrix& Y, const LossSpec& spec);

}  // namespace bayesdl::nnet
