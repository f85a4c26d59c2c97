#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::cli {

// Each emitter writes a self-contained SVG at `svg` and the numbers behind
// it to the same path with a .csv extension. Both paths are returned.
// Empty data throws DomainError; an unwritable path throws IoError.

using FigureFiles = std::vector<std::filesystem::path>;

/// Equal-width bins over [min, max]; CSV columns bin_left,bin_right,count.
FigureFiles emit_histogram(const std::filesystem::path& svg, const Vector& data, int bins,
                           const std::string& title);

/// points is 2 x n; CSV columns x,y,label.
FigureFiles emit_scatter(const std::filesystem::path& svg, const Matrix& points, const Vector& labels,
                         const std::string& title);

/// values(i, j) is the cell at x = lo + j·step, y = lo + i·step, colored by
/// its integer value; CSV columns row,col,x,y,value.
FigureFiles emit_raster(const std::filesystem::path& svg, const Matrix& values, Real lo, Real hi,
                        const std::string& title);

struct Series {
  std::string name;
  std::vector<Real> x;
  std::vector<Real> y;
};

/// Line chart; CSV columns series,x,y.
FigureFiles emit_lines(const std::filesystem::path& svg, const std::vector<Series>& series,
                       const std::string& title, const std::string& x_label, const std::string& y_label);

/// Histogram counts: `bins` equal-width bins spanning [min, max] with the
/// last bin closed. Returns edges (bins + 1) and counts.
struct Histogram {
  std::vector<Real> edges;
  std::vector<Index> counts;
};
Histogram histogram(const Vector& data, int bins);

}  // namespace bayesdl::cli
