#pragma once

#include <string>
#include <string_view>

#include "bayesdl/core/types.hpp"

namespace bayesdl::nnet {

enum class Activation { identity, relu, tanh, sigmoid, softmax, heaviside };

std::string_view to_string(Activation act);
/// Throws InputFormatError for an unknown tag.
Activation activation_from_string(std::string_view tag);

/// Elementwise activation; undefined for softmax (column-wise, see activate).
Real activate_scalar(Activation act, Real x);

/// Applies the activation to a batch of pre-activations (one observation per column).
Matrix activate(Activation act, const Matrix& pre);

/// Elementwise derivative f'(pre) given both pre- and post-activation values.
/// relu'(0) is 0. Throws for softmax (not elementwise) and heaviside (no gradient).
Matrix activation_derivative(Activation act, const Matrix& pre, const Matrix& post);

/// Column-wise log-softmax with max subtraction.
Matrix log_softmax(const Matrix& logits);

}  // namespace bayesdl::nnet
