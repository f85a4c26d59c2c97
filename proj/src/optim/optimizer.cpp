#include "bayesdl/optim/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/optim/newton.hpp"

namespace bayesdl::optim {

Real ScheduleParams::rate(long k) const {
  if (!(a > 0)) throw DomainError("schedule: initial rate must be positive");
  if (!(decay >= 0)) throw DomainError("schedule: decay must be nonnegative");
  const Real t = a * std::exp(-decay * static_cast<Real>(k));
  // exp underflow would break t_k > 0
  return t > 0 ? t : std::numeric_limits<Real>::denorm_min();
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::sgd: return "sgd";
    case Method::momentum: return "momentum";
    case Method::nesterov: return "nesterov";
    case Method::adagrad: return "adagrad";
    case Method::rmsprop: return "rmsprop";
    case Method::adam: return "adam";
    case Method::newton: return "newton";
  }
  return "sgd";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::sgd,     Method::momentum, Method::nesterov,
                                           Method::adagrad, Method::rmsprop,  Method::adam,
                                           Method::newton};
  return methods;
}

Method method_from_string(std::string_view name) {
  for (Method m : all_methods())
    if (to_string(m) == name) return m;
  throw DomainError("unknown optimizer '" + std::string(name) + "'");
}

Optimizer::Optimizer(Method method, Index parameter_count, OptimizerParams params)
    : method_(method), params_(params) {
  if (!(params_.mu >= 0 && params_.mu < 1)) throw DomainError("optimizer: mu must lie in [0, 1)");
  if (!(params_.d >= 0 && params_.d < 1)) throw DomainError("optimizer: d must lie in [0, 1)");
  if (!(params_.eps > 0)) throw DomainError("optimizer: eps must be positive");
  if (!(params_.damping >= 0)) throw DomainError("optimizer: damping must be nonnegative");
  v_ = Vector::Zero(parameter_count);
  c_ = Vector::Zero(parameter_count);
}

void Optimizer::reset() {
  v_.setZero();
  c_.setZero();
}

void Optimizer::step(Vector& x, const GradientFn& grad, long k, const ScheduleParams& schedule) {
  if (x.size() != v_.size()) throw ShapeError("optimizer: parameter vector has the wrong length");
  const auto checked = [k](Vector g) {
    if (!g.allFinite()) throw DivergenceError("non-finite gradient", k);
    return g;
  };

  if (method_ == Method::newton) {
    Vector next = newton_step([&](const Vector& p) { return checked(grad(p)); }, x,
                              params_.damping);
    if (!next.allFinite()) throw DivergenceError("non-finite Newton step", k);
    x = std::move(next);
    return;
  }

  const Real t = schedule.rate(k);
  const Real mu = params_.mu, d = params_.d, eps = params_.eps;
  switch (method_) {
    case Method::sgd: {
      x -= t * checked(grad(x));
      break;
    }
    case Method::momentum: {
      const Vector g = checked(grad(x));
      v_ = mu * v_ - t * g;
      x += v_;
      break;
    }
    case Method::nesterov: {
      const Vector g = checked(grad(x + mu * v_));
      v_ = mu * v_ - t * g;
      x += v_;
      break;
    }
    case Method::adagrad: {
      const Vector g = checked(grad(x));
      c_ += g.cwiseAbs2();
      x.array() -= t * g.array() / (c_.array().sqrt() + eps);
      break;
    }
    case Method::rmsprop: {
      const Vector g = checked(grad(x));
      c_ = d * c_ + (1 - d) * g.cwiseAbs2();
      x.array() -= t * g.array() / (c_.array().sqrt() + eps);
      break;
    }
    case Method::adam: {
      const Vector g = checked(grad(x));
      v_ = mu * v_ + (1 - mu) * g;
      c_ = d * c_ + (1 - d) * g.cwiseAbs2();
      x.array() -= t * v_.array() / (c_.array().sqrt() + eps);
      break;
    }
    case Method::newton: break;
  }
}

std::vector<Index> minibatch_indices(Index T, Index batch_size, long k) {
  if (T < 1) throw DomainError("minibatch: empty data");
  if (batch_size < 1 || batch_size > T) throw DomainError("minibatch: batch size must lie in [1, T]");
  if (k < 0) throw DomainError("minibatch: negative iteration");
  std::vector<Index> idx(static_cast<std::size_t>(batch_size));
  // (k * batch) mod T without overflow for large k
  const Index start = static_cast<Index>(((k % T) * (batch_size % T)) % T);
  for (Index i = 0; i < batch_size; ++i) idx[static_cast<std::size_t>(i)] = (start + i) % T;
  return idx;
}

}  // namespace bayesdl::optim
