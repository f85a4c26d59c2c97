#include "bayesdl/shallow/pls.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::shallow {

PlsModel pls_fit(const Matrix& X, const Matrix& Y, Index n_components) {
  if (X.cols() != Y.cols()) throw ShapeError("pls_fit: X and Y have different observation counts");
  if (X.cols() < 2 || X.rows() == 0 || Y.rows() == 0) throw ShapeError("pls_fit: empty data");
  if (n_components < 0 || n_components > std::min(X.rows(), X.cols()))
    throw DomainError("pls_fit: component count out of range");

  PlsModel m;
  m.x_mean = X.rowwise().mean();
  m.y_mean = Y.rowwise().mean();
  Matrix E = (X.colwise() - m.x_mean).transpose();  // n x p
  Matrix F = (Y.colwise() - m.y_mean).transpose();  // n x q
  for (Index j = 0; j < E.cols(); ++j) {
    if (E.col(j).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.x_mean.cwiseAbs().maxCoeff()))
      throw DomainError("pls_fit: X column " + std::to_string(j) + " has zero variance");
  }

  const Index n = E.rows(), p = E.cols(), q = F.cols(), K = n_components;
  m.T = Matrix::Zero(n, K);
  m.P = Matrix::Zero(p, K);
  m.B = Matrix::Zero(K, K);
  m.C = Matrix::Zero(q, K);
  m.W = Matrix::Zero(p, K);
  const Real scale = E.norm();

  for (Index k = 0; k < K; ++k) {
    Index start = 0;
    F.colwise().squaredNorm().maxCoeff(&start);
    Vector u = F.col(start);
    Vector w, t, c;
    Vector t_old = Vector::Zero(n);
    for (int iter = 0; iter < 500; ++iter) {
      w = E.transpose() * u;
      const Real wn = w.norm();
      if (wn <= 1e-12 * scale * std::max(1.0, u.norm()))
        throw DomainError("pls_fit: component count exceeds the rank of X");
      w /= wn;
      t = E * w;
      c = F.transpose() * t;
      const Real cn = c.norm();
      if (cn == 0) break;  // Y fully explained; the t from this pass is kept.
      c /= cn;
      u = F * c;
      if ((t - t_old).norm() <= 1e-12 * t.norm()) break;
      t_old = t;
    }
    const Real tt = t.squaredNorm();
    if (tt <= 1e-24 * scale * scale) throw DomainError("pls_fit: component count exceeds the rank of X");
    if (c.size() == 0 || !c.allFinite() || c.norm() == 0) c = Vector::Zero(q);
    const Vector pk = E.transpose() * t / tt;
    const Real b = c.norm() > 0 ? (F * c).dot(t) / tt : 0.0;
    E -= t * pk.transpose();
    F -= b * t * c.transpose();
    m.T.col(k) = t;
    m.P.col(k) = pk;
    m.W.col(k) = w;
    m.C.col(k) = c;
    m.B(k, k) = b;
  }
  m.n_components = K;
  return m;
}

Matrix pls_fitted(const PlsModel& model) {
  const Index n = model.T.rows();
  Matrix out = (model.T * model.B * model.C.transpose()).transpose();
  if (model.n_components == 0) out = Matrix::Zero(model.y_mean.size(), n);
  return out.colwise() + model.y_mean;
}

Matrix pls_predict(const PlsModel& model, const Matrix& X) {
  if (X.rows() != model.x_mean.size()) throw ShapeError("pls_predict: dimension mismatch");
  const Index n = X.cols();
  if (model.n_components == 0) return model.y_mean.replicate(1, n);
  const Matrix Ec = (X.colwise() - model.x_mean).transpose();
  // Scores of new data: T = E W (PᵀW)⁻¹
  const Matrix PtW = model.P.transpose() * model.W;
  const Matrix T = Ec * model.W * PtW.inverse();
  return (T * model.B * model.C.transpose()).transpose().colwise() + model.y_mean;
}

}  // namespace bayesdl::shallow
