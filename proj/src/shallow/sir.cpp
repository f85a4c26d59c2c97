#include "bayesdl/shallow/sir.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/linalg.hpp"
#include "bayesdl/shallow/pca.hpp"

namespace bayesdl::shallow {

SirModel sir_fit(const Matrix& X, const Vector& y, Index H, Index k) {
  const Index p = X.rows(), n = X.cols();
  if (y.size() != n) throw ShapeError("sir_fit: response length differs from observation count");
  if (H < 2) throw DomainError("sir_fit: need at least two slices");
  if (n < H) throw DomainError("sir_fit: fewer observations than slices");
  if (k < 1 || k > p) throw DomainError("sir_fit: direction count out of range");

  const Vector mean = X.rowwise().mean();
  const Matrix Xc = X.colwise() - mean;
  const Matrix sigma = Xc * Xc.transpose() / static_cast<Real>(n);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("sir_fit: predictor covariance is singular; add ridge jitter");
  const Matrix L = llt.matrixL();
  const Vector d = L.diagonal();
  if (d.minCoeff() <= 1e-6 * d.maxCoeff())
    throw ConditioningError("sir_fit: predictor covariance is singular; add ridge jitter");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] < y[b]; });

  Matrix M = Matrix::Zero(p, p);
  Index pos = 0;
  for (Index h = 0; h < H; ++h) {
    const Index size = n / H + (h < n % H ? 1 : 0);
    Vector m = Vector::Zero(p);
    for (Index i = 0; i < size; ++i) m += Xc.col(order[static_cast<std::size_t>(pos + i)]);
    m /= static_cast<Real>(size);
    M += (static_cast<Real>(size) / static_cast<Real>(n)) * m * m.transpose();
    pos += size;
  }

  // M v = λ Σ v  ⇔  (L⁻¹ M L⁻ᵀ) u = λ u with v = L⁻ᵀ u.
  const Matrix Linv_M = L.triangularView<Eigen::Lower>().solve(M);
  Matrix A = L.triangularView<Eigen::Lower>().solve(Linv_M.transpose()).transpose();
  A = (A + A.transpose()).eval() / 2;
  const SymEig<Real> eig = sym_eig(A);

  SirModel model;
  model.slice_count = H;
  model.eigenvalues = eig.values.head(k);
  model.directions = L.transpose().triangularView<Eigen::Upper>().solve(eig.vectors.leftCols(k));
  for (Index j = 0; j < k; ++j) {
    Matrix col = model.directions.col(j);
    detail::canonical_sign(col, 0);
    model.directions.col(j) = col;
  }
  return model;
}

}  // namespace bayesdl::shallow
