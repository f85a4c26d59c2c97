#include "bayesdl/geom/arrangement.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::geom {

namespace {

void validate(const Arrangement& arr) {
  const Index d = arr.dim();
  if (arr.hyperplanes.size() > 64) throw DomainError("at most 64 hyperplanes are supported");
  for (const Hyperplane& h : arr.hyperplanes) {
    if (h.w.size() != d) throw ShapeError("hyperplanes have different dimensions");
    if (h.w.squaredNorm() == 0) throw DomainError("hyperplane normal must be nonzero");
    if (!h.w.allFinite() || !std::isfinite(h.b)) throw DomainError("hyperplane is not finite");
  }
}

void validate_grid(const GridSpec& g) {
  if (!(g.hi > g.lo) || g.resolution < 2) throw DomainError("invalid grid specification");
}

Real coord(const GridSpec& g, Index i) {
  return g.lo + (g.hi - g.lo) * static_cast<Real>(i) / static_cast<Real>(g.resolution - 1);
}

std::uint64_t pattern_at(const Arrangement& arr, const Vector& x) {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < arr.hyperplanes.size(); ++k) {
    const Hyperplane& h = arr.hyperplanes[k];
    if (h.w.dot(x) + h.b > 0) bits |= std::uint64_t{1} << k;
  }
  return bits;
}

// Visits the sign pattern of every point of a 2-D grid, row by row.
template <typename Visit>
void scan_2d(const Arrangement& arr, const GridSpec& g, Visit visit) {
  const std::size_t m = arr.hyperplanes.size();
  std::vector<Real> w0(m), w1(m), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    w0[k] = arr.hyperplanes[k].w[0];
    w1[k] = arr.hyperplanes[k].w[1];
    b[k] = arr.hyperplanes[k].b;
  }
  for (Index i = 0; i < g.resolution; ++i) {
    const Real y = coord(g, i);
    for (Index j = 0; j < g.resolution; ++j) {
      const Real x = coord(g, j);
      std::uint64_t bits = 0;
      for (std::size_t k = 0; k < m; ++k)
        if (w0[k] * x + w1[k] * y + b[k] > 0) bits |= std::uint64_t{1} << k;
      visit(i, j, bits);
    }
  }
}

Index grid_count(const Arrangement& arr, const GridSpec& g) {
  const Index d = arr.dim();
  std::unordered_set<std::uint64_t> seen;
  if (d == 2) {
    std::uint64_t last = ~std::uint64_t{0};
    scan_2d(arr, g, [&](Index, Index, std::uint64_t bits) {
      if (bits != last) {
        seen.insert(bits);
        last = bits;
      }
    });
  } else if (d == 1 || d == 3) {
    Vector x(d);
    const Index r = g.resolution;
    const Index outer = d == 3 ? r : 1;
    for (Index a = 0; a < outer; ++a)
      for (Index c = 0; c < (d == 3 ? r : 1); ++c)
        for (Index e = 0; e < r; ++e) {
          x[0] = coord(g, e);
          if (d == 3) {
            x[1] = coord(g, c);
            x[2] = coord(g, a);
          }
          seen.insert(pattern_at(arr, x));
        }
  } else {
    throw DomainError("grid region counting supports dimensions 1 to 3");
  }
  return static_cast<Index>(seen.size());
}

}  // namespace

void require_general_position(const Arrangement& arr) {
  validate(arr);
  if (arr.dim() != 2) throw DomainError("the region oracle is defined for lines in the plane");
  const auto& hs = arr.hyperplanes;
  const std::size_t n = hs.size();
  std::vector<Vector> points;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Real det = hs[i].w[0] * hs[j].w[1] - hs[i].w[1] * hs[j].w[0];
      if (std::abs(det) <= 1e-12 * hs[i].w.norm() * hs[j].w.norm())
        throw DomainError("lines " + std::to_string(i) + " and " + std::to_string(j) + " are parallel");
      Vector p(2);
      p[0] = (-hs[i].b * hs[j].w[1] + hs[j].b * hs[i].w[1]) / det;
      p[1] = (-hs[i].w[0] * hs[j].b + hs[j].w[0] * hs[i].b) / det;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Real dist = std::abs(hs[k].w.dot(p) + hs[k].b) / hs[k].w.norm();
        if (dist <= 1e-9 * std::max(1.0, p.norm()))
          throw DomainError("lines " + std::to_string(i) + ", " + std::to_string(j) + " and " +
                            std::to_string(k) + " are concurrent");
      }
    }
  }
}

Index count_regions(const Arrangement& arr, RegionMethod method, const GridSpec& grid) {
  validate(arr);
  const Index n = static_cast<Index>(arr.hyperplanes.size());
  if (n == 0) return 1;
  if (method == RegionMethod::oracle) {
    require_general_position(arr);
    return 1 + n + n * (n - 1) / 2;
  }
  validate_grid(grid);
  return grid_count(arr, grid);
}

Matrix region_raster(const Arrangement& arr, const GridSpec& grid) {
  validate(arr);
  validate_grid(grid);
  if (arr.dim() != 2 && !arr.hyperplanes.empty()) throw DomainError("region_raster needs a 2-D arrangement");
  Matrix out(grid.resolution, grid.resolution);
  if (arr.hyperplanes.empty()) {
    out.setZero();
    return out;
  }
  std::unordered_map<std::uint64_t, Index> ids;
  scan_2d(arr, grid, [&](Index i, Index j, std::uint64_t bits) {
    auto [it, inserted] = ids.try_emplace(bits, static_cast<Index>(ids.size()));
    out(i, j) = static_cast<Real>(it->second);
  });
  return out;
}

Arrangement arrangement_from_layer(const nnet::Network& net) {
  const nnet::Layer& l = net.layer(0);
  Arrangement arr;
  for (Index r = 0; r < l.W.rows(); ++r) arr.hyperplanes.push_back({l.W.row(r).transpose(), l.b[r]});
  return arr;
}

Index relu_regions(const nnet::Network& net, const GridSpec& grid) {
  if (net.input_dim() != 2) throw DomainError("relu_regions needs a 2-D input");
  if (net.layer(0).act != nnet::Activation::relu) throw DomainError("relu_regions needs a ReLU first layer");
  validate_grid(grid);
  const Arrangement arr = arrangement_from_layer(net);
  if (arr.hyperplanes.size() > 64) throw DomainError("at most 64 hidden units are supported");
  // A unit with zero weights is constant; it still contributes its fixed bit.
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t last = ~std::uint64_t{0};
  scan_2d(arr, grid, [&](Index, Index, std::uint64_t bits) {
    if (bits != last) {
      seen.insert(bits);
      last = bits;
    }
  });
  return static_cast<Index>(seen.size());
}

Arrangement random_generic_lines(Index n, Rng& rng, Real box, Real min_gap) {
  if (n < 0 || n > 64) throw DomainError("random_generic_lines: n must be in [0, 64]");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Arrangement arr;
    for (Index k = 0; k < n; ++k) {
      const Real angle = std::numbers::pi * rng.uniform01();
      Vector w(2);
      w << std::cos(angle), std::sin(angle);
      arr.hyperplanes.push_back({w, (2 * rng.uniform01() - 1) * box * 0.5});
    }
    bool ok = true;
    const auto& hs = arr.hyperplanes;
    for (Index i = 0; i < n && ok; ++i) {
      for (Index j = i + 1; j < n && ok; ++j) {
        const Real det = hs[i].w[0] * hs[j].w[1] - hs[i].w[1] * hs[j].w[0];
        if (std::abs(det) < 0.05) {
          ok = false;
          break;
        }
        const Real px = (-hs[i].b * hs[j].w[1] + hs[j].b * hs[i].w[1]) / det;
        const Real py = (-hs[i].w[0] * hs[j].b + hs[j].w[0] * hs[i].b) / det;
        if (std::abs(px) > box || std::abs(py) > box) ok = false;
        for (Index k = 0; k < n && ok; ++k) {
          if (k == i || k == j) continue;
          if (std::abs(hs[k].w[0] * px + hs[k].w[1] * py + hs[k].b) < min_gap) ok = false;
        }
      }
    }
    if (ok) return arr;
  }
  throw DomainError("random_generic_lines: could not place lines in general position");
}

}  // namespace bayesdl::geom
