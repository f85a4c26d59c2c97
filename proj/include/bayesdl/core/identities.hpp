#pragma once

#include <algorithm>
#include <cmath>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/types.hpp"

namespace bayesdl {

/// Closed-form rewrites of interactions and maxima as functions of
/// semi-affine combinations of the inputs.
enum class IdentityKind {
  product,          // x1 x2 = ¼(x1+x2)² - ¼(x1-x2)²
  max,              // max(x1,x2) = ½(x1+x2) + ½|x1-x2|
  product_squared,  // (x1 x2)² as a sum of four fourth powers
  max_sum,          // nested ReLU chain = max over prefix sums, positive part
};

template <typename Scalar>
struct IdentityCheck {
  Scalar lhs;
  Scalar rhs;

  bool holds(Scalar rel_tol = Scalar(1e-10)) const {
    return std::abs(lhs - rhs) <= rel_tol * (Scalar(1) + std::abs(lhs));
  }
};

/// Evaluates both sides of the chosen identity at x: lhs directly, rhs
/// through the rewritten form.
template <typename Derived>
IdentityCheck<typename Derived::Scalar> verify_identity(IdentityKind kind,
                                                       const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto pos = [](Scalar v) { return std::max(v, Scalar(0)); };

  if (kind == IdentityKind::max_sum) {
    if (x.size() < 1) throw ShapeError("max_sum identity needs at least one entry");
    const Index k = x.size();
    // (f_{x1} ∘ ... ∘ f_{xk})(0) with f_x(b) = (x + b)^+, innermost first.
    Scalar nested = pos(x[k - 1]);
    for (Index i = k - 2; i >= 0; --i) nested = pos(x[i] + nested);
    Scalar prefix = 0, best = 0;
    for (Index i = 0; i < k; ++i) {
      prefix += x[i];
      best = std::max(best, prefix);
    }
    return {nested, best};
  }

  if (x.size() != 2) throw ShapeError("identity expects exactly two entries");
  const Scalar a = x[0], b = x[1];
  const Scalar sum = a + b, diff = a - b;
  switch (kind) {
    case IdentityKind::product:
      return {a * b, Scalar(0.25) * sum * sum - Scalar(0.25) * diff * diff};
    case IdentityKind::max:
      return {std::max(a, b), Scalar(0.5) * sum + Scalar(0.5) * std::abs(diff)};
    case IdentityKind::product_squared: {
      const auto p4 = [](Scalar v) { return v * v * v * v; };
      const Scalar rhs = Scalar(0.25) * p4(sum) + Scalar(7) / Scalar(108) * p4(diff) -
                         Scalar(1) / Scalar(54) * p4(a + Scalar(2) * b) -
                         Scalar(8) / Scalar(27) * p4(a + Scalar(0.5) * b);
      return {(a * b) * (a * b), rhs};
    }
    case IdentityKind::max_sum:
      break;
  }
  throw ShapeError("unknown identity kind");
}

}  // namespace bayesdl
