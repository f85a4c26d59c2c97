#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <set>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"
#include "bayesdl/core/identities.hpp"
#include "bayesdl/core/linalg.hpp"
#include "bayesdl/core/matrix_io.hpp"
#include "bayesdl/core/rng.hpp"

using namespace bayesdl;

namespace {

Matrix random_matrix(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.std_normal();
  return m;
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(1);
  const Index n = 200000;
  const Vector u = prng_stream(rng, StreamKind::uniform01, n);
  EXPECT_GE(u.minCoeff(), 0.0);
  EXPECT_LT(u.maxCoeff(), 1.0);
  EXPECT_NEAR(u.mean(), 0.5, 4 * std::sqrt(1.0 / 12 / n));
  const Vector z = prng_stream(rng, StreamKind::std_normal, n);
  EXPECT_NEAR(z.mean(), 0.0, 4 / std::sqrt(double(n)));
  EXPECT_NEAR(z.squaredNorm() / n, 1.0, 4 * std::sqrt(2.0 / n));
  const Vector b = prng_stream(rng, StreamKind::bernoulli, n, 0.3);
  EXPECT_NEAR(b.mean(), 0.3, 4 * std::sqrt(0.21 / n));
}

TEST(Rng, MillionNormalsMoments) {
  Rng rng(42);
  const Index n = 1000000;
  const Vector z = prng_stream(rng, StreamKind::std_normal, n);
  const double mean = z.mean();
  EXPECT_LT(std::abs(mean), 4 / std::sqrt(double(n)));
  const double var = (z.array() - mean).square().sum() / (n - 1);
  EXPECT_LT(std::abs(var - 1), 0.01);
  Rng a(42), b(42);
  EXPECT_EQ(prng_stream(a, StreamKind::uniform01, 5), prng_stream(b, StreamKind::uniform01, 5));
  EXPECT_EQ(prng_stream(a, StreamKind::bernoulli, 100, 1.0), Vector::Ones(100));
}

TEST(Rng, BernoulliRejectsBadProbability) {
  Rng rng(1);
  EXPECT_THROW(rng.bernoulli(1.5), DomainError);
  EXPECT_THROW(rng.bernoulli(-0.1), DomainError);
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(Rng, PermutationIsBijective) {
  Rng rng(9);
  const auto p = random_permutation(1000, rng);
  std::set<Index> s(p.begin(), p.end());
  EXPECT_EQ(s.size(), 1000u);
  EXPECT_EQ(*s.begin(), 0);
  EXPECT_EQ(*s.rbegin(), 999);
}

TEST(Rng, SplitStreamsAreDistinctAndReproducible) {
  const Rng root(5);
  Rng a = root.split(1), b = root.split(2), a2 = root.split(1);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_EQ(x, a2.next());
}

TEST(SymEig, MatchesEigenSolverOnRandomSymmetric) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 7;
    Matrix a = random_matrix(n, n, rng);
    a = (a + a.transpose()).eval();
    const SymEig<Real> mine = sym_eig(a);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
    Vector ref_values = ref.eigenvalues().reverse();
    EXPECT_LT((mine.values - ref_values).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((a * mine.vectors - mine.vectors * mine.values.asDiagonal()).norm(), 1e-9);
    EXPECT_LT((mine.vectors.transpose() * mine.vectors - Matrix::Identity(n, n)).norm(), 1e-10);
    for (Index j = 0; j < n; ++j) {
      Index first = 0;
      while (std::abs(mine.vectors(first, j)) < 1e-8) ++first;
      EXPECT_GT(mine.vectors(first, j), 0.0);
    }
  }
}

TEST(SymEig, RejectsNonSymmetricAndNonSquare) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  EXPECT_THROW(sym_eig(a), ShapeError);
  EXPECT_THROW(sym_eig(Matrix::Zero(2, 3)), ShapeError);
}

TEST(SymEig, TwoByTwoExample) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto e = sym_eig(a);
  EXPECT_NEAR(e.values[0], 3, 1e-14);
  EXPECT_NEAR(e.values[1], 1, 1e-14);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(e.vectors(0, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 1), -r, 1e-14);
}

TEST(SymEig, ThousandRandomInstances) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.uniform_index(12));
    Matrix a = random_matrix(n, n, rng);
    a = (a + a.transpose()).eval();
    const auto e = sym_eig(a);
    const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT(relative_frobenius_error(a, rec), 1e-8);
    EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm(), 1e-8);
    const Index m = 1 + static_cast<Index>(rng.uniform_index(12));
    const Matrix x = random_matrix(m, n, rng);
    const auto s = svd(x);
    EXPECT_LT(relative_frobenius_error(x, Matrix(s.U * s.S.asDiagonal() * s.V.transpose())), 1e-8);
  }
}

TEST(SymEig, DiagonalInputSortedDescending) {
  Matrix a = Vector::LinSpaced(4, 1, 4).asDiagonal();
  const auto e = sym_eig(a);
  EXPECT_DOUBLE_EQ(e.values[0], 4);
  EXPECT_DOUBLE_EQ(e.values[3], 1);
  EXPECT_DOUBLE_EQ(e.vectors(3, 0), 1);
}

TEST(Svd, MatchesJacobiSvd) {
  Rng rng(4);
  for (Index m : {3, 6, 9}) {
    for (Index n : {2, 5, 9}) {
      const Matrix x = random_matrix(m, n, rng);
      const Svd<Real> s = svd(x);
      Eigen::JacobiSVD<Matrix> ref(x);
      EXPECT_LT((s.S - ref.singularValues()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((s.U * s.S.asDiagonal() * s.V.transpose() - x).norm(), 1e-10);
      const Index k = std::min(m, n);
      EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(k, k)).norm(), 1e-10);
      EXPECT_LT((s.V.transpose() * s.V - Matrix::Identity(k, k)).norm(), 1e-10);
    }
  }
}

TEST(Svd, RankDeficientKeepsOrthonormalBasis) {
  Rng rng(8);
  const Matrix a = random_matrix(6, 2, rng);
  const Matrix x = a * random_matrix(2, 4, rng);
  const Svd<Real> s = svd(x);
  EXPECT_LT(s.S[2], 1e-12);
  EXPECT_LT(s.S[3], 1e-12);
  EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(4, 4)).norm(), 1e-10);
  EXPECT_LT((s.U * s.S.asDiagonal() * s.V.transpose() - x).norm(), 1e-10);
}

TEST(Svd, DiagonalAndRankOneExamples) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  const auto s = svd(d);
  EXPECT_DOUBLE_EQ(s.S[0], 3);
  EXPECT_DOUBLE_EQ(s.S[1], 0);
  Vector u(4), v(3);
  u << 1, 2, 2, 4;
  v << 2, -1, 2;
  u.normalize();
  v.normalize();
  const auto r = svd(Matrix(5 * u * v.transpose()));
  EXPECT_NEAR(r.S[0], 5, 1e-12);
  EXPECT_LT(r.S.tail(2).norm(), 1e-12);
}

TEST(Svd, ZeroMatrix) {
  const Svd<Real> s = svd(Matrix::Zero(3, 2));
  EXPECT_EQ(s.S.norm(), 0.0);
  EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(SpdSolve, SolvesAndDetectsSingular) {
  Matrix a(2, 2);
  a << 4, 1, 1, 3;
  Vector b(2);
  b << 1, 2;
  const Matrix x = spd_solve(a, b);
  EXPECT_LT((a * x - b).norm(), 1e-12);
  Matrix s(2, 2);
  s << 1, 1, 1, 1;
  EXPECT_THROW(spd_solve(s, b), ConditioningError);
  EXPECT_THROW(spd_solve(a, Vector::Ones(3)), ShapeError);
}

TEST(Identities, ProductAndMaxHoldOnExamples) {
  Vector x(2);
  x << 3, -4;
  auto p = verify_identity(IdentityKind::product, x);
  EXPECT_DOUBLE_EQ(p.lhs, -12);
  EXPECT_NEAR(p.rhs, -12, 1e-12);
  auto m = verify_identity(IdentityKind::max, x);
  EXPECT_DOUBLE_EQ(m.lhs, 3);
  EXPECT_TRUE(m.holds());
  x << -3, -4;
  EXPECT_TRUE(verify_identity(IdentityKind::max, x).holds());
  EXPECT_DOUBLE_EQ(verify_identity(IdentityKind::max, x).lhs, -3);
}

TEST(Identities, HandExamples) {
  Vector x(2);
  x << 2, 3;
  auto p = verify_identity(IdentityKind::product, x);
  EXPECT_DOUBLE_EQ(p.lhs, 6);
  EXPECT_DOUBLE_EQ(p.rhs, 6);
  x << 1, 1;
  auto q = verify_identity(IdentityKind::product_squared, x);
  EXPECT_DOUBLE_EQ(q.lhs, 1);
  EXPECT_NEAR(q.rhs, 1, 1e-14);
  Vector y(3);
  y << 1, -2, 3;
  auto m = verify_identity(IdentityKind::max_sum, y);
  EXPECT_DOUBLE_EQ(m.lhs, 2);
  EXPECT_DOUBLE_EQ(m.rhs, 2);
}

TEST(Identities, RandomSweep) {
  Rng rng(11);
  for (auto kind : {IdentityKind::product, IdentityKind::max, IdentityKind::product_squared, IdentityKind::max_sum}) {
    for (int s = 0; s < 10000; ++s) {
      Vector x(kind == IdentityKind::max_sum ? 1 + s % 10 : 2);
      for (Index i = 0; i < x.size(); ++i) x[i] = 10 * rng.uniform01() - 5;
      EXPECT_TRUE(verify_identity(kind, x).holds(1e-9));
    }
  }
}

TEST(Identities, MaxSumIsPositivePartOfLargestPrefixSum) {
  Vector x(3);
  x << 1, -3, 5;
  const auto c = verify_identity(IdentityKind::max_sum, x);
  EXPECT_TRUE(c.holds());
  EXPECT_DOUBLE_EQ(c.rhs, 3);  // prefix sums 1, -2, 3
}

TEST(Identities, WrongArityThrows) {
  EXPECT_THROW(verify_identity(IdentityKind::product, Vector::Ones(3)), ShapeError);
  EXPECT_THROW(verify_identity(IdentityKind::max_sum, Vector(0)), ShapeError);
}

TEST(MatrixIo, RoundTripIsExact) {
  Rng rng(2);
  const Matrix m = random_matrix(4, 3, rng) * 1e-7;
  std::stringstream ss;
  write_matrix_csv(ss, m);
  const Matrix back = read_matrix_csv(ss);
  EXPECT_EQ(back, m);
}

TEST(MatrixIo, RaggedRowsReportLine) {
  std::stringstream ss("1,2\n3\n");
  try {
    read_matrix_csv(ss);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::stringstream bad("1,x\n");
  EXPECT_THROW(read_matrix_csv(bad), ParseError);
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3, 1e-300, -2.5e17, 0.0}) {
    double back = 0;
    ASSERT_TRUE(parse_real(format_real(v), back));
    EXPECT_EQ(back, v);
  }
  double out;
  EXPECT_FALSE(parse_real("1.0x", out));
  EXPECT_FALSE(parse_real("", out));
}
