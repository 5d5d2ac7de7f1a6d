#include "qdep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qdep/errors.hpp"
#include "qdep/text_util.hpp"

namespace qdep {

namespace {

constexpr int kPlotLeft = 70;
constexpr int kPlotTop = 30;
constexpr int kPlotSize = 400;
constexpr int kWidth = kPlotLeft + kPlotSize + 30;
constexpr int kHeight = kPlotTop + kPlotSize + 60;

constexpr const char* kBlue = "#4a7fd4";
constexpr const char* kPink = "#f2a9c4";

void open_svg(std::ostringstream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";
}

void title_line(std::ostringstream& out, const std::string& text) {
  out << "<text x=\"" << kPlotLeft << "\" y=\"19\" font-family=\"monospace\""
      << " font-size=\"13\" fill=\"#000000\">" << text << "</text>\n";
}

// Ticks at 0.0, 0.2, ..., 1.0 on both unit axes and the frame rectangle.
void axes(std::ostringstream& out) {
  out << "<rect x=\"" << kPlotLeft << "\" y=\"" << kPlotTop << "\" width=\""
      << kPlotSize << "\" height=\"" << kPlotSize
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const int tenths = 2 * t;
    const std::string label =
        std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
    const int x = kPlotLeft + kPlotSize * t / 5;
    const int y = kPlotTop + kPlotSize - kPlotSize * t / 5;
    out << "<line x1=\"" << x << "\" y1=\"" << kPlotTop + kPlotSize
        << "\" x2=\"" << x << "\" y2=\"" << kPlotTop + kPlotSize + 6
        << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kPlotTop + kPlotSize + 20
        << "\" font-family=\"monospace\" font-size=\"12\""
        << " text-anchor=\"middle\">" << label << "</text>\n";
    out << "<line x1=\"" << kPlotLeft - 6 << "\" y1=\"" << y << "\" x2=\""
        << kPlotLeft << "\" y2=\"" << y
        << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kPlotLeft - 10 << "\" y=\"" << y + 4
        << "\" font-family=\"monospace\" font-size=\"12\""
        << " text-anchor=\"end\">" << label << "</text>\n";
  }
  const int cx = kPlotLeft + kPlotSize / 2;
  out << "<text x=\"" << cx << "\" y=\"" << kHeight - 14
      << "\" font-family=\"monospace\" font-size=\"13\""
      << " text-anchor=\"middle\">u</text>\n";
  const int cy = kPlotTop + kPlotSize / 2;
  out << "<text x=\"22\" y=\"" << cy << "\" font-family=\"monospace\""
      << " font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
      << cy << ")\">v</text>\n";
}

std::string blend_from_white(int r, int g, int b, double weight) {
  const double w = std::clamp(weight, 0.0, 1.0);
  const auto mix = [w](int channel) {
    return static_cast<int>(std::lround(255.0 + (channel - 255.0) * w));
  };
  return "rgb(" + std::to_string(mix(r)) + "," + std::to_string(mix(g)) + "," +
         std::to_string(mix(b)) + ")";
}

}  // namespace

std::string diagram_svg(const DependenceDiagram& diagram) {
  std::ostringstream out;
  open_svg(out);
  out << "<defs>\n"
      << "<pattern id=\"mixed\" width=\"8\" height=\"8\""
      << " patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n"
      << "<rect width=\"8\" height=\"8\" fill=\"" << kPink << "\"/>\n"
      << "<rect width=\"4\" height=\"8\" fill=\"" << kBlue << "\"/>\n"
      << "</pattern>\n</defs>\n";
  const BarrierMeta& meta = diagram.meta;
  title_line(out, "dependence diagram: n=" + std::to_string(meta.n) + " d=" +
                      std::to_string(meta.d) + " alpha_side=" +
                      format_double(meta.alpha_side) + " runs=" +
                      std::to_string(meta.runs) + " seed=" +
                      std::to_string(meta.master_seed));
  const int cell = kPlotSize / 10;
  for (int l = 1; l <= 10; ++l) {
    for (int k = 1; k <= 10; ++k) {
      const CellClass cls = cell_class(diagram.cells[k - 1][l - 1]);
      std::string fill = "#ffffff";
      if (cls == CellClass::Blue) fill = kBlue;
      if (cls == CellClass::Pink) fill = kPink;
      if (cls == CellClass::Mixed) fill = "url(#mixed)";
      const int x = kPlotLeft + (k - 1) * cell;
      const int y = kPlotTop + (10 - l) * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << fill
          << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    }
  }
  axes(out);
  out << "</svg>\n";
  return std::move(out).str();
}

std::string surface_svg(const QSurface& surface) {
  const int d = surface.grid.d;
  if (d < 1) throw DomainError("surface_svg: empty grid");
  std::ostringstream out;
  open_svg(out);
  title_line(out, "quantile dependence surface: n=" + std::to_string(surface.n) +
                      " d=" + std::to_string(d));
  const double cell = static_cast<double>(kPlotSize) / d;
  for (int k = 1; k <= d; ++k) {
    const double y = kPlotTop + (d - k) * cell;
    for (int j = 1; j <= d; ++j) {
      const double q = surface.q_at(j, k);
      std::string fill = "#ffffff";
      if (q < 0.0) fill = blend_from_white(74, 127, 212, -q);
      if (q > 0.0) fill = blend_from_white(242, 169, 196, q);
      const double x = kPlotLeft + (j - 1) * cell;
      out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
          << "\" width=\"" << format_double(cell) << "\" height=\""
          << format_double(cell) << "\" fill=\"" << fill
          << "\" shape-rendering=\"crispEdges\"/>\n";
    }
  }
  axes(out);
  out << "</svg>\n";
  return std::move(out).str();
}

std::string bet_svg(const std::vector<double>& u, const std::vector<double>& v,
                    const PatternSelection& selection) {
  if (u.size() != v.size()) throw DomainError("bet_svg: column length mismatch");
  std::ostringstream out;
  open_svg(out);
  title_line(out, "strongest symmetry " + selection.label + ": S=" +
                      std::to_string(selection.s_value) + " p=" +
                      format_double(selection.p));
  const int cell = kPlotSize / 4;
  for (int b = 0; b < 4; ++b) {
    const double v_mid = (b + 0.5) / 4.0;
    const int y = kPlotTop + (3 - b) * cell;
    for (int a = 0; a < 4; ++a) {
      const double u_mid = (a + 0.5) / 4.0;
      const bool negative = walsh(selection.i, u_mid) * walsh(selection.j, v_mid) < 0;
      const int x = kPlotLeft + a * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\""
          << (negative ? "#c7d8f2" : "#ffffff") << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = kPlotLeft + kPlotSize * u[i];
    const double y = kPlotTop + kPlotSize * (1.0 - v[i]);
    out << "<circle cx=\"" << format_double(x) << "\" cy=\"" << format_double(y)
        << "\" r=\"3\" fill=\"#222222\"/>\n";
  }
  axes(out);
  out << "</svg>\n";
  return std::move(out).str();
}

}  // namespace qdep
