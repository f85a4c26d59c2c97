#include "bayesdl/shallow/autoencoder.hpp"

#include "bayesdl/core/errors.hpp"

namespace bayesdl::shallow {

namespace {

Matrix decode_with(const nnet::Network& net, const Matrix& Z) {
  const nnet::Layer& dec = net.layer(1);
  return (dec.W * Z).colwise() + dec.b;
}

Matrix encode_with(const nnet::Network& net, const Matrix& X) {
  const nnet::Layer& enc = net.layer(0);
  return nnet::activate(enc.act, (enc.W * X).colwise() + enc.b);
}

}  // namespace

Real split_objective(const nnet::Network& net, const Matrix& X, const Matrix& Z, Real lambda) {
  return (X - decode_with(net, Z)).squaredNorm() + lambda * Z.squaredNorm() +
         (Z - encode_with(net, X)).squaredNorm();
}

AutoencoderModel autoencoder_fit(const Matrix& X, const AutoencoderConfig& config) {
  const Index p = X.rows();
  if (X.cols() == 0 || p == 0) throw ShapeError("autoencoder_fit: empty data");
  if (config.K < 1 || config.K > p)
    throw DomainError("autoencoder_fit: bottleneck width must be in [1, p]");
  if (config.activation == nnet::Activation::softmax || config.activation == nnet::Activation::heaviside)
    throw DomainError("autoencoder_fit: encoder activation must be differentiable and elementwise");
  if (!(config.lambda >= 0)) throw DomainError("autoencoder_fit: lambda must be nonnegative");

  Rng rng(config.seed);
  nnet::Network net = nnet::make_network(
      p, {{config.K, config.activation}, {p, nnet::Activation::identity}}, rng);
  const nnet::LossSpec spec{nnet::LossKind::l2,
                            {config.lambda > 0 ? nnet::PenaltyKind::l2 : nnet::PenaltyKind::none, config.lambda}};
  optim::TrainConfig tc;
  tc.epochs = config.epochs;
  tc.batch_size = X.cols();
  tc.seed = config.seed;
  tc.schedule = config.schedule;
  tc.shuffle_once = false;
  optim::TrainResult tr = optim::train(std::move(net), X, X, spec, tc, config.method);

  const Matrix Z = encode_with(tr.net, X);
  AutoencoderModel model{std::move(tr.net), 0, 0, std::move(tr.trace)};
  model.reconstruction_error = (X - decode_with(model.net, Z)).squaredNorm();
  model.split_objective = split_objective(model.net, X, Z, config.lambda);
  return model;
}

Matrix encode(const AutoencoderModel& model, const Matrix& X) {
  if (X.rows() != model.net.input_dim()) throw ShapeError("encode: dimension mismatch");
  return encode_with(model.net, X);
}

Matrix decode(const AutoencoderModel& model, const Matrix& Z) {
  if (Z.rows() != model.net.layer(0).out_dim()) throw ShapeError("decode: dimension mismatch");
  return decode_with(model.net, Z);
}

}  // namespace bayesdl::shallow
