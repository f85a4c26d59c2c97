#pragma once

#include "bayesdl/nnet/network.hpp"
#include "bayesdl/optim/train.hpp"

namespace bayesdl::shallow {

struct AutoencoderConfig {
  Index K = 2;
  Real lambda = 0;
  nnet::Activation activation = nnet::Activation::identity;
  optim::Method method = optim::Method::adam;
  int epochs = 4000;
  optim::ScheduleParams schedule{0.01, 0.0};
  std::uint64_t seed = 0;
};

struct AutoencoderModel {
  nnet::Network net;  // encoder layer (K units) then linear decoder
  /// ‖X - F_W(X)‖²
  Real reconstruction_error = 0;
  /// ‖X - W₂Z - b₂‖² + λ‖Z‖² + ‖Z - f(W₁X + b₁)‖² at Z = f(W₁X + b₁)
  Real split_objective = 0;
  std::vector<optim::TraceRow> trace;
};

/// Full-batch training of X ≈ F_W(X) with penalty λ‖W‖².
AutoencoderModel autoencoder_fit(const Matrix& X, const AutoencoderConfig& config);

Matrix encode(const AutoencoderModel& model, const Matrix& X);
Matrix decode(const AutoencoderModel& model, const Matrix& Z);

/// Evaluates the encode/decode split objective for a given code Z.
Real split_objective(const nnet::Network& net, const Matrix& X, const Matrix& Z, Real lambda);

}  // namespace bayesdl::shallow
