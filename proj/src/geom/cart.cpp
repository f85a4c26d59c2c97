#include "bayesdl/geom/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::geom {

namespace {

Real gini(const std::vector<Index>& counts, Index total) {
  if (total == 0) return 0;
  Real s = 0;
  for (Index c : counts) {
    const Real f = static_cast<Real>(c) / static_cast<Real>(total);
    s += f * f;
  }
  return 1 - s;
}

int majority(const std::vector<Index>& counts) {
  int best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

struct Builder {
  const Matrix& X;
  const std::vector<int>& y;
  CartTree& tree;

  int build(std::vector<Index> idx, int depth) {
    CartNode node;
    node.depth = depth;
    node.histogram.assign(static_cast<std::size_t>(tree.n_classes), 0);
    for (Index i : idx) ++node.histogram[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])];
    node.label = majority(node.histogram);
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const Index n = static_cast<Index>(idx.size());
    const bool pure = std::count(node.histogram.begin(), node.histogram.end(), 0) >=
                      static_cast<long>(node.histogram.size()) - 1;
    if (pure || depth >= tree.max_depth || n < 2 * tree.min_leaf) return id;

    Real best_score = std::numeric_limits<Real>::infinity();
    Index best_feature = -1;
    Real best_threshold = 0;
    for (Index f = 0; f < X.rows(); ++f) {
      std::vector<Index> order = idx;
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return X(f, a) < X(f, b); });
      std::vector<Index> left(static_cast<std::size_t>(tree.n_classes), 0);
      std::vector<Index> right = node.histogram;
      for (Index k = 0; k + 1 < n; ++k) {
        const Index i = order[static_cast<std::size_t>(k)];
        const auto c = static_cast<std::size_t>(y[static_cast<std::size_t>(i)]);
        ++left[c];
        --right[c];
        const Real v = X(f, i), next = X(f, order[static_cast<std::size_t>(k + 1)]);
        if (!(next > v)) continue;
        const Index nl = k + 1, nr = n - nl;
        if (nl < tree.min_leaf || nr < tree.min_leaf) continue;
        const Real score = (static_cast<Real>(nl) * gini(left, nl) + static_cast<Real>(nr) * gini(right, nr)) /
                           static_cast<Real>(n);
        const Real threshold = v + (next - v) / 2;
        // Strict improvement beyond rounding; features and thresholds are
        // visited in increasing order so the first candidate wins ties.
        if (score < best_score - 1e-12) {
          best_score = score;
          best_feature = f;
          best_threshold = threshold;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<Index> li, ri;
    for (Index i : idx) (X(best_feature, i) <= best_threshold ? li : ri).push_back(i);
    const int l = build(std::move(li), depth + 1);
    const int r = build(std::move(ri), depth + 1);
    CartNode& self = tree.nodes[static_cast<std::size_t>(id)];
    self.leaf = false;
    self.feature = best_feature;
    self.threshold = best_threshold;
    self.left = l;
    self.right = r;
    return id;
  }
};

}  // namespace

Index CartTree::leaf_count() const {
  return std::count_if(nodes.begin(), nodes.end(), [](const CartNode& n) { return n.leaf; });
}

CartTree cart_fit(const Matrix& X, const Vector& labels, Index max_depth, Index min_leaf) {
  const Index n = X.cols();
  if (labels.size() != n) throw ShapeError("cart_fit: one label per observation is required");
  if (min_leaf < 1) throw DomainError("cart_fit: min_leaf must be at least 1");
  if (max_depth < 0) throw DomainError("cart_fit: max_depth must be nonnegative");
  if (n < 2 * min_leaf) throw DomainError("cart_fit: need at least 2·min_leaf observations");
  if (!X.allFinite()) throw DomainError("cart_fit: non-finite features");
  std::vector<int> y(static_cast<std::size_t>(n));
  int classes = 0;
  for (Index i = 0; i < n; ++i) {
    const Real v = labels[i];
    if (v < 0 || v != std::floor(v)) throw DomainError("cart_fit: labels must be nonnegative integers");
    y[static_cast<std::size_t>(i)] = static_cast<int>(v);
    classes = std::max(classes, static_cast<int>(v) + 1);
  }
  CartTree tree;
  tree.max_depth = max_depth;
  tree.min_leaf = min_leaf;
  tree.n_features = X.rows();
  tree.n_classes = classes;
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Builder{X, y, tree}.build(std::move(idx), 0);
  return tree;
}

int leaf_of(const CartTree& tree, const Vector& x) {
  if (tree.nodes.empty()) throw DomainError("tree is not fitted");
  if (x.size() != tree.n_features) throw ShapeError("feature count differs from the tree");
  int id = 0;
  while (!tree.nodes[static_cast<std::size_t>(id)].leaf) {
    const CartNode& node = tree.nodes[static_cast<std::size_t>(id)];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return id;
}

int cart_predict(const CartTree& tree, const Vector& x) {
  return tree.nodes[static_cast<std::size_t>(leaf_of(tree, x))].label;
}

Vector cart_predict(const CartTree& tree, const Matrix& X) {
  Vector out(X.cols());
  for (Index i = 0; i < X.cols(); ++i) out[i] = cart_predict(tree, Vector(X.col(i)));
  return out;
}

Real accuracy(const Vector& predicted, const Vector& truth) {
  if (predicted.size() != truth.size() || truth.size() == 0) throw ShapeError("accuracy: size mismatch");
  return (predicted.array() == truth.array()).cast<Real>().mean();
}

int tree_kernel(const CartTree& tree, const Vector& x, const Vector& x2) {
  return leaf_of(tree, x) == leaf_of(tree, x2) ? 1 : 0;
}

Box leaf_bounds(const CartTree& tree, int leaf) {
  if (leaf < 0 || leaf >= static_cast<int>(tree.nodes.size()) || !tree.nodes[static_cast<std::size_t>(leaf)].leaf)
    throw DomainError("leaf_bounds: not a leaf");
  const Real inf = std::numeric_limits<Real>::infinity();
  Box box{Vector::Constant(tree.n_features, -inf), Vector::Constant(tree.n_features, inf)};
  // Walk from the root, following whichever child contains the leaf.
  std::vector<int> parent(tree.nodes.size(), -1);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!tree.nodes[i].leaf) {
      parent[static_cast<std::size_t>(tree.nodes[i].left)] = static_cast<int>(i);
      parent[static_cast<std::size_t>(tree.nodes[i].right)] = static_cast<int>(i);
    }
  }
  for (int child = leaf, p = parent[static_cast<std::size_t>(leaf)]; p >= 0;
       child = p, p = parent[static_cast<std::size_t>(p)]) {
    const CartNode& node = tree.nodes[static_cast<std::size_t>(p)];
    if (child == node.left)
      box.hi[node.feature] = std::min(box.hi[node.feature], node.threshold);
    else
      box.lo[node.feature] = std::max(box.lo[node.feature], node.threshold);
  }
  return box;
}

Matrix kernel_map(const CartTree& tree, const Vector& x, Real lo, Real hi, Index resolution) {
  if (tree.n_features != 2) throw DomainError("kernel_map needs a 2-D tree");
  if (!(hi > lo) || resolution < 2) throw DomainError("kernel_map: invalid grid");
  const int target = leaf_of(tree, x);
  Matrix out(resolution, resolution);
  Vector g(2);
  const Real step = (hi - lo) / static_cast<Real>(resolution - 1);
  for (Index i = 0; i < resolution; ++i) {
    for (Index j = 0; j < resolution; ++j) {
      g << lo + static_cast<Real>(j) * step, lo + static_cast<Real>(i) * step;
      out(i, j) = leaf_of(tree, g) == target ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace bayesdl::geom
