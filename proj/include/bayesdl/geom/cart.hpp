#pragma once

#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::geom {

struct CartNode {
  bool leaf = true;
  Index feature = -1;
  Real threshold = 0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int label = 0;
  std::vector<Index> histogram;  // class counts of the training points here
  int depth = 0;
};

struct CartTree {
  std::vector<CartNode> nodes;  // nodes[0] is the root
  Index max_depth = 0;
  Index min_leaf = 1;
  Index n_features = 0;
  int n_classes = 0;

  Index leaf_count() const;
};

/// Greedy Gini CART over column observations X (d x n) and integer labels.
/// An impure node above max_depth is split on the best (feature, midpoint)
/// candidate with both children of at least min_leaf points, even when the
/// impurity does not drop; ties go to the lower feature, then the lower
/// threshold. Leaves predict the majority class, ties to the lower label.
CartTree cart_fit(const Matrix& X, const Vector& labels, Index max_depth, Index min_leaf = 1);

int cart_predict(const CartTree& tree, const Vector& x);
Vector cart_predict(const CartTree& tree, const Matrix& X);
/// Node index of the leaf that x falls in.
int leaf_of(const CartTree& tree, const Vector& x);

Real accuracy(const Vector& predicted, const Vector& truth);

/// 1 when x and x' fall in the same leaf, 0 otherwise.
int tree_kernel(const CartTree& tree, const Vector& x, const Vector& x2);

/// Axis-aligned bounds (lo < x ≤ hi per feature) of a leaf; unbounded sides are ±inf.
struct Box {
  Vector lo;
  Vector hi;
};
Box leaf_bounds(const CartTree& tree, int leaf);

/// tree_kernel(tree, x, g) painted over a 2-D grid [lo, hi]²; entry (i, j)
/// is the grid point (lo + j·step, lo + i·step).
Matrix kernel_map(const CartTree& tree, const Vector& x, Real lo, Real hi, Index resolution);

}  // namespace bayesdl::geom
