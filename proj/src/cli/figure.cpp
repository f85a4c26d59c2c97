#include "bayesdl/cli/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/format.hpp"

namespace bayesdl::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
                                "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#8c564b"};
constexpr int kPaletteSize = 12;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::filesystem::path csv_path(const std::filesystem::path& svg) {
  std::filesystem::path p = svg;
  p.replace_extension(".csv");
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame make_frame(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  return {x0, x1, y0, y1};
}

std::string open_svg(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << escape(title) << "</text>\n";
  return s.str();
}

std::string axes(const Frame& f, const std::string& xl, const std::string& yl) {
  std::ostringstream s;
  const double bx = kHeight - kBottom, lx = kLeft, rx = kWidth - kRight, ty = kTop;
  s << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">"
    << "<line x1=\"" << lx << "\" y1=\"" << bx << "\" x2=\"" << rx << "\" y2=\"" << bx << "\"/>"
    << "<line x1=\"" << lx << "\" y1=\"" << bx << "\" x2=\"" << lx << "\" y2=\"" << ty << "\"/></g>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">";
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x0 + (f.x1 - f.x0) * t / 4.0, yv = f.y0 + (f.y1 - f.y0) * t / 4.0;
    s << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << bx + 15 << "\" text-anchor=\"middle\">" << escape(format_real(std::round(xv * 1000) / 1000)) << "</text>";
    s << "<text x=\"" << lx - 5 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << escape(format_real(std::round(yv * 1000) / 1000)) << "</text>";
  }
  s << "<text x=\"" << (lx + rx) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(xl) << "</text>";
  s << "<text x=\"14\" y=\"" << (ty + bx) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << (ty + bx) / 2
    << ")\">" << escape(yl) << "</text></g>\n";
  return s.str();
}

}  // namespace

Histogram histogram(const Vector& data, int bins) {
  if (data.size() == 0) throw DomainError("histogram of empty data");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (!data.allFinite()) throw DomainError("histogram data must be finite");
  double lo = data.minCoeff(), hi = data.maxCoeff();
  if (!(hi > lo)) lo -= 0.5, hi += 0.5;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  for (Index i = 0; i < data.size(); ++i) {
    auto b = static_cast<int>(std::floor((data[i] - lo) / (hi - lo) * bins));
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

FigureFiles emit_histogram(const std::filesystem::path& svg, const Vector& data, int bins, const std::string& title) {
  const Histogram h = histogram(data, bins);
  std::ostringstream csv;
  csv << "bin_left,bin_right,count\n";
  for (int b = 0; b < bins; ++b)
    csv << format_real(h.edges[static_cast<std::size_t>(b)]) << ',' << format_real(h.edges[static_cast<std::size_t>(b) + 1]) << ','
        << h.counts[static_cast<std::size_t>(b)] << '\n';

  const Index top = *std::max_element(h.counts.begin(), h.counts.end());
  const Frame f = make_frame(h.edges.front(), h.edges.back(), 0, static_cast<double>(top));
  std::ostringstream s;
  s << open_svg(title) << "<g fill=\"" << kPalette[0] << "\" stroke=\"#fff\" stroke-width=\"0.5\">\n";
  for (int b = 0; b < bins; ++b) {
    const double x0 = f.px(h.edges[static_cast<std::size_t>(b)]), x1 = f.px(h.edges[static_cast<std::size_t>(b) + 1]);
    const double y = f.py(static_cast<double>(h.counts[static_cast<std::size_t>(b)]));
    s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y) << "\" width=\"" << num(x1 - x0) << "\" height=\""
      << num(f.py(0) - y) << "\"/>\n";
  }
  s << "</g>\n" << axes(f, "value", "count") << "</svg>\n";
  write_file(svg, s.str());
  write_file(csv_path(svg), csv.str());
  return {svg, csv_path(svg)};
}

FigureFiles emit_scatter(const std::filesystem::path& svg, const Matrix& points, const Vector& labels,
                         const std::string& title) {
  if (points.cols() == 0) throw DomainError("scatter of empty data");
  if (points.rows() != 2 || labels.size() != points.cols()) throw ShapeError("scatter needs 2 x n points and n labels");
  std::ostringstream csv;
  csv << "x,y,label\n";
  for (Index i = 0; i < points.cols(); ++i)
    csv << format_real(points(0, i)) << ',' << format_real(points(1, i)) << ',' << format_real(labels[i]) << '\n';
  const Frame f = make_frame(points.row(0).minCoeff(), points.row(0).maxCoeff(), points.row(1).minCoeff(),
                             points.row(1).maxCoeff());
  std::ostringstream s;
  s << open_svg(title);
  for (Index i = 0; i < points.cols(); ++i) {
    const int c = static_cast<int>(std::abs(std::lround(labels[i]))) % kPaletteSize;
    s << "<circle cx=\"" << num(f.px(points(0, i))) << "\" cy=\"" << num(f.py(points(1, i))) << "\" r=\"2.5\" fill=\""
      << kPalette[c] << "\"/>\n";
  }
  s << axes(f, "x1", "x2") << "</svg>\n";
  write_file(svg, s.str());
  write_file(csv_path(svg), csv.str());
  return {svg, csv_path(svg)};
}

FigureFiles emit_raster(const std::filesystem::path& svg, const Matrix& values, Real lo, Real hi,
                        const std::string& title) {
  if (values.size() == 0) throw DomainError("raster of empty data");
  if (!(hi > lo)) throw DomainError("raster range is empty");
  const Index rows = values.rows(), cols = values.cols();
  const double sx = cols > 1 ? (hi - lo) / static_cast<double>(cols - 1) : 0.0;
  const double sy = rows > 1 ? (hi - lo) / static_cast<double>(rows - 1) : 0.0;
  std::ostringstream csv;
  csv << "row,col,x,y,value\n";
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      csv << i << ',' << j << ',' << format_real(lo + static_cast<double>(j) * sx) << ','
          << format_real(lo + static_cast<double>(i) * sy) << ',' << format_real(values(i, j)) << '\n';

  const Frame f = make_frame(lo, hi, lo, hi);
  const double cw = (f.px(hi) - f.px(lo)) / static_cast<double>(cols);
  const double ch = (f.py(lo) - f.py(hi)) / static_cast<double>(rows);
  std::ostringstream s;
  s << open_svg(title) << "<g shape-rendering=\"crispEdges\">\n";
  for (Index i = 0; i < rows; ++i) {
    const double y = f.py(lo) - static_cast<double>(i + 1) * ch;
    Index j = 0;
    while (j < cols) {
      Index end = j + 1;
      while (end < cols && values(i, end) == values(i, j)) ++end;
      const int c = static_cast<int>(std::abs(std::lround(values(i, j)))) % kPaletteSize;
      s << "<rect x=\"" << num(f.px(lo) + static_cast<double>(j) * cw) << "\" y=\"" << num(y) << "\" width=\""
        << num(static_cast<double>(end - j) * cw) << "\" height=\"" << num(ch) << "\" fill=\"" << kPalette[c] << "\"/>\n";
      j = end;
    }
  }
  s << "</g>\n" << axes(f, "x1", "x2") << "</svg>\n";
  write_file(svg, s.str());
  write_file(csv_path(svg), csv.str());
  return {svg, csv_path(svg)};
}

FigureFiles emit_lines(const std::filesystem::path& svg, const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  std::size_t total = 0;
  std::ostringstream csv;
  csv << "series,x,y\n";
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw ShapeError("series '" + s.name + "' has mismatched x and y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      csv << s.name << ',' << format_real(s.x[i]) << ',' << format_real(s.y[i]) << '\n';
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
      ++total;
    }
  }
  if (total == 0) throw DomainError("line chart of empty data");
  const Frame f = make_frame(x0, x1, y0, y1);
  std::ostringstream s;
  s << open_svg(title);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& ser = series[k];
    s << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[k % kPaletteSize] << "\" points=\"";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      s << num(f.px(ser.x[i])) << ',' << num(f.py(ser.y[i])) << ' ';
    }
    s << "\"/>\n";
    s << "<text x=\"" << kWidth - kRight - 5 << "\" y=\"" << kTop + 14 * (static_cast<double>(k) + 1)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[k % kPaletteSize]
      << "\">" << escape(ser.name) << "</text>\n";
  }
  s << axes(f, x_label, y_label) << "</svg>\n";
  write_file(svg, s.str());
  write_file(csv_path(svg), csv.str());
  return {svg, csv_path(svg)};
}

}  // namespace bayesdl::cli
