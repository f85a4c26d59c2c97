#include <gtest/gtest.h>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/rng.hpp"
#include "bayesdl/nnet/loss.hpp"
#include "bayesdl/nnet/network.hpp"
#include "bayesdl/nnet/serialize.hpp"

using namespace bayesdl;
using namespace bayesdl::nnet;

namespace {

Matrix gaussian(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.std_normal();
  return m;
}

Network single_layer(const Matrix& W, const Vector& b, Activation act) {
  return Network(W.cols(), {Layer{W, b, act}});
}

}  // namespace

TEST(Activation, ZeroIsFixedPointForTanhAndRelu) {
  EXPECT_EQ(activate_scalar(Activation::tanh, 0.0), 0.0);
  EXPECT_EQ(activate_scalar(Activation::relu, 0.0), 0.0);
  EXPECT_EQ(activate_scalar(Activation::relu, -1.0), 0.0);
  EXPECT_EQ(activate_scalar(Activation::heaviside, 0.5), 1.0);
  EXPECT_EQ(activate_scalar(Activation::heaviside, -0.5), 0.0);
  EXPECT_DOUBLE_EQ(activate_scalar(Activation::sigmoid, 0.0), 0.5);
}

TEST(Activation, StringRoundTrip) {
  for (auto a : {Activation::identity, Activation::relu, Activation::tanh, Activation::sigmoid,
                 Activation::softmax, Activation::heaviside})
    EXPECT_EQ(activation_from_string(to_string(a)), a);
  EXPECT_THROW(activation_from_string("swish"), InputFormatError);
}

TEST(Forward, IdentityLayerReturnsInput) {
  Rng rng(1);
  const Matrix X = gaussian(3, 4, rng);
  const auto net = single_layer(Matrix::Identity(3, 3), Vector::Zero(3), Activation::identity);
  EXPECT_EQ(predict(net, X), X);
}

TEST(Forward, ReluHandExample) {
  Vector b(2);
  b << -1, 0;
  const auto net = single_layer(Matrix::Identity(2, 2), b, Activation::relu);
  Matrix x(2, 1);
  x << 0.5, 2;
  const Matrix out = predict(net, x);
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_EQ(out(1, 0), 2.0);
}

TEST(Forward, SoftmaxColumnsSumToOne) {
  Rng rng(2);
  const auto net = make_network(
      48, {{64, Activation::relu}, {64, Activation::relu}, {12, Activation::softmax}}, rng);
  const Matrix out = predict(net, 10 * gaussian(48, 30, rng));
  EXPECT_GE(out.minCoeff(), 0.0);
  for (Index j = 0; j < out.cols(); ++j) EXPECT_NEAR(out.col(j).sum(), 1.0, 1e-12);
}

TEST(Forward, Deterministic) {
  Rng rng(3);
  const auto net = make_network(4, {{5, Activation::tanh}, {2, Activation::identity}}, rng);
  const Matrix X = gaussian(4, 7, rng);
  EXPECT_EQ(predict(net, X), predict(net, X));
}

TEST(Forward, ShapeErrors) {
  Rng rng(4);
  const auto net = make_network(3, {{2, Activation::relu}}, rng);
  EXPECT_THROW(predict(net, Matrix::Zero(4, 2)), ShapeError);
  EXPECT_THROW(Network(3, {Layer{Matrix::Zero(2, 3), Vector::Zero(2), Activation::relu},
                           Layer{Matrix::Zero(2, 3), Vector::Zero(2), Activation::relu}}),
               ShapeError);
  EXPECT_THROW(Network(3, {Layer{Matrix::Zero(2, 3), Vector::Zero(3), Activation::relu}}), ShapeError);
}

TEST(Objective, PerfectFitAndPenaltyExample) {
  Rng rng(5);
  const Matrix X = gaussian(2, 6, rng);
  const auto net = single_layer(Matrix::Identity(2, 2), Vector::Zero(2), Activation::identity);
  EXPECT_EQ(objective(net, X, X, {LossKind::l2, {}}), 0.0);

  Matrix w(1, 1);
  w << 2;
  const auto one = single_layer(w, Vector::Zero(1), Activation::identity);
  const Matrix zero = Matrix::Zero(1, 3);
  EXPECT_DOUBLE_EQ(objective(one, zero, zero, {LossKind::l2, {PenaltyKind::l2, 0.5}}), 2.0);
  EXPECT_DOUBLE_EQ(objective(one, zero, zero, {LossKind::l2, {PenaltyKind::l1, 0.5}}), 1.0);
  EXPECT_DOUBLE_EQ(objective(one, zero, zero, {LossKind::l2, {PenaltyKind::l2, 0.0}}), 0.0);
}

TEST(Objective, CrossEntropyRequiresOneHot) {
  const auto net = single_layer(Matrix::Identity(2, 2), Vector::Zero(2), Activation::softmax);
  Matrix y(2, 1);
  y << 0.5, 0.5;
  EXPECT_THROW(objective(net, Matrix::Zero(2, 1), y, {LossKind::cross_entropy, {}}), InputFormatError);
  EXPECT_THROW(one_hot_labels({0, 3}, 3), DomainError);
  const Matrix oh = one_hot_labels({2, 0}, 3);
  EXPECT_EQ(oh(2, 0), 1.0);
  EXPECT_EQ(oh(0, 1), 1.0);
  EXPECT_EQ(oh.sum(), 2.0);
}

TEST(Backprop, SoftmaxCrossEntropyLogitGradient) {
  const auto net = single_layer(Matrix::Identity(2, 2), Vector::Zero(2), Activation::softmax);
  Matrix x = Matrix::Zero(2, 1);
  const Gradients g = backprop(net, x, one_hot_labels({0}, 2), {LossKind::cross_entropy, {}});
  EXPECT_NEAR(g.db[0][0], -0.5, 1e-15);
  EXPECT_NEAR(g.db[0][1], 0.5, 1e-15);
}

TEST(Backprop, ZeroResidualGivesZeroGradient) {
  Rng rng(6);
  const Matrix X = gaussian(3, 5, rng);
  const auto net = single_layer(Matrix::Identity(3, 3), Vector::Zero(3), Activation::identity);
  EXPECT_EQ(backprop(net, X, X, {}).flat().norm(), 0.0);
}

TEST(Backprop, LinearRegressionMatchesNormalEquationGradient) {
  Rng rng(7);
  const Matrix X = gaussian(4, 20, rng);
  const Matrix y = gaussian(1, 20, rng);
  const auto net = single_layer(gaussian(1, 4, rng), Vector::Zero(1), Activation::identity);
  const Gradients g = backprop(net, X, y, {});
  const Matrix w = net.layer(0).W;
  const Matrix expected = 2 * (w * X - y) * X.transpose();
  EXPECT_LT((g.dW[0] - expected).norm(), 1e-10 * (1 + expected.norm()));
  EXPECT_LT(grad_check(net, X, y, {}), 1e-7);
}

TEST(Backprop, HeavisideIsRejected) {
  Rng rng(8);
  const auto net = make_network(2, {{3, Activation::heaviside}, {1, Activation::identity}}, rng);
  EXPECT_FALSE(net.differentiable());
  EXPECT_THROW(backprop(net, Matrix::Zero(2, 1), Matrix::Zero(1, 1), {}), UnsupportedGradientError);
  EXPECT_NO_THROW(predict(net, Matrix::Zero(2, 1)));
}

struct CorpusCase {
  const char* name;
  Index input;
  std::vector<LayerSpec> layers;
  LossSpec loss;
};

class GradCheckCorpus : public ::testing::TestWithParam<CorpusCase> {};

TEST_P(GradCheckCorpus, FiniteDifferencesAgree) {
  const auto& c = GetParam();
  Rng rng(100);
  const auto net = make_network(c.input, c.layers, rng);
  const Matrix X = gaussian(c.input, 9, rng);
  Matrix Y;
  if (c.loss.loss == LossKind::cross_entropy) {
    std::vector<int> labels;
    for (int i = 0; i < 9; ++i) labels.push_back(i % static_cast<int>(net.output_dim()));
    Y = one_hot_labels(labels, net.output_dim());
  } else {
    Y = gaussian(net.output_dim(), 9, rng);
  }
  EXPECT_LT(grad_check(net, X, Y, c.loss), 1e-5) << c.name;
}

INSTANTIATE_TEST_SUITE_P(
    Architectures, GradCheckCorpus,
    ::testing::Values(
        CorpusCase{"tanh_2_2_2_softmax", 2,
                   {{2, Activation::tanh}, {2, Activation::tanh}, {2, Activation::softmax}},
                   {LossKind::cross_entropy, {}}},
        CorpusCase{"deep_relu", 3,
                   {{6, Activation::relu}, {6, Activation::relu}, {5, Activation::relu}, {2, Activation::identity}},
                   {LossKind::l2, {PenaltyKind::l2, 0.1}}},
        CorpusCase{"sigmoid_l2", 4, {{5, Activation::sigmoid}, {3, Activation::identity}}, {}},
        CorpusCase{"relu_softmax", 5, {{8, Activation::relu}, {4, Activation::softmax}},
                   {LossKind::cross_entropy, {PenaltyKind::l2, 0.01}}}));

TEST(Serialize, RoundTripIsExact) {
  Rng rng(9);
  const auto net = make_network(3, {{4, Activation::tanh}, {2, Activation::softmax}}, rng);
  const Network back = network_from_json(network_to_json(net));
  EXPECT_EQ(back.parameters(), net.parameters());
  EXPECT_EQ(back.layer(1).act, Activation::softmax);
  EXPECT_EQ(back.input_dim(), 3);
  EXPECT_THROW(network_from_json("{\"input_dim\": 2}"), Error);
  EXPECT_THROW(network_from_json("not json"), Error);
}

TEST(Network, ParameterFlatteningRoundTrip) {
  Rng rng(10);
  auto net = make_network(3, {{4, Activation::relu}, {2, Activation::identity}}, rng);
  EXPECT_EQ(net.parameter_count(), 3 * 4 + 4 + 4 * 2 + 2);
  Vector p = Vector::LinSpaced(net.parameter_count(), 0, 1);
  net.set_parameters(p);
  EXPECT_EQ(net.parameters(), p);
  EXPECT_THROW(net.set_parameters(Vector::Zero(3)), ShapeError);
}
