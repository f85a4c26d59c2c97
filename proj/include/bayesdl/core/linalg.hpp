#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/types.hpp"

namespace bayesdl {

template <typename Scalar>
struct SymEig {
  VectorX<Scalar> values;   // descending
  MatrixX<Scalar> vectors;  // eigenvectors as columns
};

template <typename Scalar>
struct Svd {
  MatrixX<Scalar> U;  // m x k, k = min(m, n)
  VectorX<Scalar> S;  // nonnegative, descending
  MatrixX<Scalar> V;  // n x k
};

namespace detail {

template <typename Scalar>
bool all_finite(const MatrixX<Scalar>& m) {
  return m.allFinite();
}

/// Flip a column so that its first entry that is not negligible is nonnegative.
/// Returns true when the column was flipped.
template <typename Scalar>
bool canonical_sign(MatrixX<Scalar>& m, Index col) {
  auto v = m.col(col);
  const Scalar norm = v.norm();
  if (norm == Scalar(0)) return false;
  const Scalar tiny = norm * Scalar(1e3) * std::numeric_limits<Scalar>::epsilon();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tiny) {
      if (v[i] < Scalar(0)) {
        v = -v;
        return true;
      }
      return false;
    }
  }
  return false;
}

template <typename Scalar>
std::vector<Index> descending_order(const VectorX<Scalar>& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] > values[b]; });
  return order;
}

}  // namespace detail

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted in descending order; each eigenvector's first
/// non-negligible entry is nonnegative.
template <typename Derived>
SymEig<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) throw ShapeError("sym_eig: matrix is not square");
  MatrixX<Scalar> a = input;
  if (!a.allFinite()) throw DomainError("sym_eig: non-finite entries");
  const Index n = a.rows();
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale)
    throw ShapeError("sym_eig: matrix is not symmetric");
  a = (a + a.transpose()).eval() / Scalar(2);

  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    Scalar off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= eps * eps * a.squaredNorm() || off == Scalar(0)) break;

    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  const VectorX<Scalar> diag = a.diagonal();
  const auto order = detail::descending_order(diag);
  SymEig<Scalar> out{VectorX<Scalar>(n), MatrixX<Scalar>(n, n)};
  for (Index j = 0; j < n; ++j) {
    out.values[j] = diag[order[static_cast<std::size_t>(j)]];
    out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
    detail::canonical_sign(out.vectors, j);
  }
  return out;
}

/// Thin singular value decomposition by one-sided (Hestenes) Jacobi.
/// Columns of V follow the sign convention; U's columns are flipped along.
/// Left singular vectors for zero singular values are completed to an
/// orthonormal set.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> x = input;
  if (!x.allFinite()) throw DomainError("svd: non-finite entries");
  if (x.rows() < x.cols()) {
    Svd<Scalar> t = svd(x.transpose().eval());
    Svd<Scalar> out{std::move(t.V), std::move(t.S), std::move(t.U)};
    for (Index j = 0; j < out.S.size(); ++j) {
      if (detail::canonical_sign(out.V, j)) out.U.col(j) = -out.U.col(j);
    }
    return out;
  }

  const Index m = x.rows(), n = x.cols();
  MatrixX<Scalar> u = x;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const Scalar alpha = u.col(i).squaredNorm();
        const Scalar beta = u.col(j).squaredNorm();
        const Scalar gamma = u.col(i).dot(u.col(j));
        if (gamma == Scalar(0) || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Index k = 0; k < m; ++k) {
          const Scalar ui = u(k, i), uj = u(k, j);
          u(k, i) = c * ui - s * uj;
          u(k, j) = s * ui + c * uj;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar vi = v(k, i), vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  VectorX<Scalar> norms(n);
  for (Index j = 0; j < n; ++j) norms[j] = u.col(j).norm();
  const auto order = detail::descending_order(norms);

  Svd<Scalar> out{MatrixX<Scalar>(m, n), VectorX<Scalar>(n), MatrixX<Scalar>(n, n)};
  const Scalar smax = n > 0 ? norms[order[0]] : Scalar(0);
  const Scalar cutoff = smax * Scalar(m) * eps;
  std::vector<Index> deficient;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.S[j] = norms[src];
    out.V.col(j) = v.col(src);
    if (norms[src] > cutoff && norms[src] > Scalar(0)) {
      out.U.col(j) = u.col(src) / norms[src];
    } else {
      out.U.col(j).setZero();
      deficient.push_back(j);
    }
  }
  // Complete the left basis with Gram-Schmidt over the standard basis.
  Index candidate = 0;
  for (Index j : deficient) {
    for (; candidate < m; ++candidate) {
      VectorX<Scalar> e = VectorX<Scalar>::Unit(m, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index k = 0; k < n; ++k) {
          if (k == j) continue;
          e -= out.U.col(k).dot(e) * out.U.col(k);
        }
      }
      const Scalar len = e.norm();
      if (len > Scalar(0.5)) {
        out.U.col(j) = e / len;
        ++candidate;
        break;
      }
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (detail::canonical_sign(out.V, j)) out.U.col(j) = -out.U.col(j);
  }
  return out;
}

/// Solves A x = b for symmetric positive-definite A by Cholesky.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> spd_solve(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.rows() != a.cols() || a.rows() != b.rows()) throw ShapeError("spd_solve: shape mismatch");
  Eigen::LLT<MatrixX<Scalar>> llt(a);
  if (llt.info() != Eigen::Success) throw ConditioningError("matrix is not positive definite");
  const VectorX<Scalar> d = llt.matrixL().toDenseMatrix().diagonal();
  if (d.minCoeff() <= d.maxCoeff() * Scalar(1e-12))
    throw ConditioningError("matrix is numerically singular");
  return llt.solve(b);
}

/// ||a - b||_F / ||a||_F, or the plain norm when a is zero.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar relative_frobenius_error(const Eigen::MatrixBase<DerivedA>& a,
                                                   const Eigen::MatrixBase<DerivedB>& b) {
  const auto denom = a.norm();
  const auto diff = (a - b).norm();
  return denom > 0 ? diff / denom : diff;
}

}  // namespace bayesdl
