#pragma once

#include "relviz/data.hpp"
#include "relviz/types.hpp"

#include <string>
#include <vector>

namespace relviz {

// Shortest round-trip decimal form of a double (std::to_chars).
std::string fmt_double(double value);

// Strict double parse of a whole field; throws input_error otherwise.
double parse_double_field(const std::string& field, const std::string& context);

// Splits one CSV line on commas; no quoting, trailing '\r' stripped.
std::vector<std::string> split_csv(const std::string& line);

// Writes content to path via a temporary file plus rename, so a failed run
// never leaves a partial file behind.
void atomic_write_file(const std::string& path, const std::string& content);

// Coordinates CSV, header "id,x,y".
std::string coords_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& coords);

// Per-dimension diagonal weights CSV, header "k,wD,wF".
std::string weights_csv(const Vector& wD, const Vector& wF);

// Features CSV, header "id,f1,...,fD".
std::string features_csv(const FeatureMatrix& features);

// Labels CSV, header "id,label"; one row per (item, label).
std::string labels_csv(const LabelSet& labels, const std::vector<std::string>& ids);

// Counts CSV, header "i,j,count"; only strictly positive counts are written.
std::string counts_csv(const CountMatrix& counts, const std::vector<std::string>& ids);

}  // namespace relviz
