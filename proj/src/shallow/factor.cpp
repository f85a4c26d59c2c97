#include "bayesdl/shallow/factor.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/linalg.hpp"

namespace bayesdl::shallow {

namespace {

Real soft_threshold(Real x, Real t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0;
}

void lasso_weights(const Matrix& Z, const Matrix& F, Real lambda, Matrix& W) {
  const Index K = F.rows();
  const Vector fnorm = F.rowwise().squaredNorm();
  Matrix R = Z - W * F;
  for (int pass = 0; pass < 1000; ++pass) {
    Real change = 0;
    for (Index n = 0; n < W.rows(); ++n) {
      for (Index k = 0; k < K; ++k) {
        if (fnorm[k] == 0) {
          W(n, k) = 0;
          continue;
        }
        const Real old = W(n, k);
        const Real rho = R.row(n).dot(F.row(k)) + old * fnorm[k];
        const Real w = soft_threshold(rho, lambda / 2) / fnorm[k];
        if (w != old) {
          R.row(n) -= (w - old) * F.row(k);
          W(n, k) = w;
          change = std::max(change, std::abs(w - old));
        }
      }
    }
    if (change <= 1e-14 * std::max(1.0, W.cwiseAbs().maxCoeff())) break;
  }
}

}  // namespace

Real factor_objective(const Matrix& Z, const Matrix& W, const Matrix& F, Real lambda, FactorNorm norm) {
  const Real fit = (Z - W * F).squaredNorm();
  const Real pen = norm == FactorNorm::l1 ? W.cwiseAbs().sum() : W.squaredNorm();
  return fit + lambda * pen;
}

FactorModel factor_fit(const Matrix& Z, Index K, Real lambda, FactorNorm norm, const FactorOptions& options) {
  const Index N = Z.rows();
  if (Z.cols() == 0 || N == 0) throw ShapeError("factor_fit: empty data");
  if (K < 1 || K >= N || K > Z.cols()) throw DomainError("factor_fit: need 1 <= K < N");
  if (!(lambda >= 0)) throw DomainError("factor_fit: lambda must be nonnegative");
  if (!Z.allFinite()) throw DomainError("factor_fit: non-finite data");

  const Svd<Real> s = svd(Z);
  FactorModel m;
  m.lambda = lambda;
  m.norm = norm;
  m.factors = s.S.head(K).asDiagonal() * s.V.leftCols(K).transpose();
  m.weights = s.U.leftCols(K);
  Real obj = factor_objective(Z, m.weights, m.factors, lambda, norm);
  m.objective_trace.push_back(obj);

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    const Real before = obj;
    if (norm == FactorNorm::l2) {
      const Matrix G = m.factors * m.factors.transpose() + lambda * Matrix::Identity(K, K);
      Eigen::LDLT<Matrix> ldlt(G);
      m.weights = ldlt.solve(m.factors * Z.transpose()).transpose();
    } else {
      lasso_weights(Z, m.factors, lambda, m.weights);
    }
    m.objective_trace.push_back(factor_objective(Z, m.weights, m.factors, lambda, norm));
    m.factors = m.weights.completeOrthogonalDecomposition().solve(Z);
    obj = factor_objective(Z, m.weights, m.factors, lambda, norm);
    m.objective_trace.push_back(obj);
    m.sweeps = sweep;
    if (!std::isfinite(obj)) throw DivergenceError("factor_fit: objective is not finite", sweep);
    if (std::abs(before - obj) <= options.tolerance * std::max(before, 1e-300)) {
      m.converged = true;
      break;
    }
  }
  return m;
}

}  // namespace bayesdl::shallow
