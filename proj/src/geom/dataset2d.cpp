#include "bayesdl/geom/dataset2d.hpp"

#include <cmath>
#include <numbers>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/rng.hpp"

namespace bayesdl::geom {

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::simple: return "simple";
    case DatasetKind::circle: return "circle";
    case DatasetKind::spiral: return "spiral";
  }
  return "simple";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "simple") return DatasetKind::simple;
  if (name == "circle") return DatasetKind::circle;
  if (name == "spiral") return DatasetKind::spiral;
  throw InputFormatError("unknown dataset kind '" + name + "'");
}

Dataset2D gen_dataset2d(DatasetKind kind, Index n, Real noise, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw DomainError("gen_dataset2d: n must be even and positive");
  if (!(noise >= 0)) throw DomainError("gen_dataset2d: noise must be nonnegative");
  Rng rng(seed);
  Dataset2D d{Matrix(2, n), Vector(n), kind};
  const Index half = n / 2;
  constexpr Real pi = std::numbers::pi;
  for (Index i = 0; i < n; ++i) {
    const int label = i < half ? 0 : 1;
    Real x = 0, y = 0;
    switch (kind) {
      case DatasetKind::simple:
        x = (label == 0 ? -1.5 : 1.5) + 0.5 * rng.std_normal();
        y = 0.5 * rng.std_normal();
        break;
      case DatasetKind::circle: {
        const Real angle = 2 * pi * rng.uniform01();
        const Real r = label == 0 ? std::sqrt(rng.uniform01())
                                  : std::sqrt(1.5 * 1.5 + (2.5 * 2.5 - 1.5 * 1.5) * rng.uniform01());
        x = r * std::cos(angle);
        y = r * std::sin(angle);
        break;
      }
      case DatasetKind::spiral: {
        const Real theta = pi / 2 + (3 * pi - pi / 2) * rng.uniform01();
        const Real r = theta / 3;
        const Real sign = label == 0 ? 1.0 : -1.0;
        x = sign * r * std::cos(theta);
        y = sign * r * std::sin(theta);
        break;
      }
    }
    d.points(0, i) = x + noise * rng.std_normal();
    d.points(1, i) = y + noise * rng.std_normal();
    d.labels[i] = label;
  }
  return d;
}

}  // namespace bayesdl::geom
