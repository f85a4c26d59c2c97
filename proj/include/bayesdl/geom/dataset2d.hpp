#pragma once

#include <cstdint>
#include <string>

#include "bayesdl/core/types.hpp"

namespace bayesdl::geom {

enum class DatasetKind { simple, circle, spiral };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& name);

struct Dataset2D {
  Matrix points;  // 2 x n
  Vector labels;  // 0 or 1; the first n/2 points are class 0
  DatasetKind kind = DatasetKind::simple;
};

/// simple: blobs of spread 0.5 at (±1.5, 0). circle: class 0 uniform in the
/// unit disk, class 1 uniform in the annulus 1.5 ≤ r ≤ 2.5. spiral: arms
/// r = θ/3 for θ ∈ [π/2, 3π], class 1 rotated by π. Every point then gets
/// N(0, noise²) jitter per coordinate.
Dataset2D gen_dataset2d(DatasetKind kind, Index n, Real noise, std::uint64_t seed);

}  // namespace bayesdl::geom
