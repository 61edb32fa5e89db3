#pragma once

#include "relviz/data.hpp"

#include <string>

namespace relviz {

// Standalone SVG scatterplot: one circle per item, colored by its
// lexicographically first label from a fixed 8-color palette assigned in
// lexicographic label order (cycling past 8). Axes autoscale to the data
// bounding box with a 5% margin; labeled classes get a legend entry.
// Identical inputs produce identical bytes.
std::string svg_scatter(const Eigen::MatrixXd& coords, const LabelSet& labels);

}  // namespace relviz
