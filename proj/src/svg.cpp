#include "relviz/svg.hpp"

#include "relviz/io.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

namespace relviz {

namespace {

constexpr std::array<const char*, 8> kPalette = {
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
    "#ff7f00", "#a65628", "#f781bf", "#999999"};
constexpr const char* kDefaultColor = "#606060";

constexpr double kCanvasW = 660.0;
constexpr double kCanvasH = 500.0;
constexpr double kPlotX = 20.0, kPlotY = 20.0, kPlotSize = 460.0;
constexpr double kLegendX = 500.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_scatter(const Eigen::MatrixXd& coords, const LabelSet& labels) {
  if (coords.cols() != 2) throw input_error("svg_scatter: coordinates must be N x 2");
  const int n = static_cast<int>(coords.rows());

  std::map<std::string, std::string> color_of;
  {
    int idx = 0;
    for (const auto& label : labels.distinct_labels())
      color_of[label] = kPalette[idx++ % kPalette.size()];
  }

  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  if (n > 0) {
    xmin = coords.col(0).minCoeff();
    xmax = coords.col(0).maxCoeff();
    ymin = coords.col(1).minCoeff();
    ymax = coords.col(1).maxCoeff();
  }
  const double xpad = xmax > xmin ? 0.05 * (xmax - xmin) : 1.0;
  const double ypad = ymax > ymin ? 0.05 * (ymax - ymin) : 1.0;
  const double xlo = xmin - xpad, xhi = xmax + xpad;
  const double ylo = ymin - ypad, yhi = ymax + ypad;

  auto px = [&](double x) { return kPlotX + (x - xlo) / (xhi - xlo) * kPlotSize; };
  auto py = [&](double y) { return kPlotY + (yhi - y) / (yhi - ylo) * kPlotSize; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(kCanvasW) +
         "\" height=\"" + fmt_double(kCanvasH) + "\" viewBox=\"0 0 " + fmt_double(kCanvasW) +
         " " + fmt_double(kCanvasH) + "\">\n";
  svg += "<rect x=\"" + fmt_double(kPlotX) + "\" y=\"" + fmt_double(kPlotY) + "\" width=\"" +
         fmt_double(kPlotSize) + "\" height=\"" + fmt_double(kPlotSize) +
         "\" fill=\"white\" stroke=\"#cccccc\"/>\n";

  for (int i = 0; i < n; ++i) {
    const auto* item_labels = labels.labels_of(i);
    const std::string color =
        item_labels && !item_labels->empty() ? color_of.at(*item_labels->begin())
                                             : kDefaultColor;
    svg += "<circle cx=\"" + fmt_double(px(coords(i, 0))) + "\" cy=\"" +
           fmt_double(py(coords(i, 1))) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
  }

  double ly = kPlotY;
  for (const auto& [label, color] : color_of) {
    svg += "<rect x=\"" + fmt_double(kLegendX) + "\" y=\"" + fmt_double(ly) +
           "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + fmt_double(kLegendX + 18.0) + "\" y=\"" + fmt_double(ly + 11.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + xml_escape(label) + "</text>\n";
    ly += 20.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace relviz
