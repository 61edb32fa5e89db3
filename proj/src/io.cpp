#include "relviz/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace relviz {

std::string fmt_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& field, const std::string& context) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw input_error(context + ": not a number: '" + field + "'");
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw input_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw input_error("cannot move output into place: " + path);
  }
}

std::string coords_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& coords) {
  std::string out = "id,x,y\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out += ids[static_cast<std::size_t>(i)];
    out += ',';
    out += fmt_double(coords(i, 0));
    out += ',';
    out += fmt_double(coords(i, 1));
    out += '\n';
  }
  return out;
}

std::string weights_csv(const Vector& wD, const Vector& wF) {
  std::string out = "k,wD,wF\n";
  for (Eigen::Index k = 0; k < wD.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += fmt_double(wD[k]);
    out += ',';
    out += fmt_double(wF[k]);
    out += '\n';
  }
  return out;
}

std::string features_csv(const FeatureMatrix& features) {
  std::string out = "id";
  for (int c = 1; c <= features.dim(); ++c) out += ",f" + std::to_string(c);
  out += '\n';
  for (int i = 0; i < features.n_items(); ++i) {
    out += features.ids[static_cast<std::size_t>(i)];
    for (int c = 0; c < features.dim(); ++c) {
      out += ',';
      out += fmt_double(features.X(i, c));
    }
    out += '\n';
  }
  return out;
}

std::string labels_csv(const LabelSet& labels, const std::vector<std::string>& ids) {
  std::string out = "id,label\n";
  for (const auto& [item, set] : labels.assignments)
    for (const auto& label : set) {
      out += ids[static_cast<std::size_t>(item)];
      out += ',';
      out += label;
      out += '\n';
    }
  return out;
}

std::string counts_csv(const CountMatrix& counts, const std::vector<std::string>& ids) {
  std::string out = "i,j,count\n";
  for (std::size_t m = 0; m < counts.observed.size(); ++m) {
    if (!(counts.counts[m] > 0.0)) continue;
    const Pair& p = counts.observed[m];
    out += ids[static_cast<std::size_t>(p.i)];
    out += ',';
    out += ids[static_cast<std::size_t>(p.j)];
    out += ',';
    out += fmt_double(counts.counts[m]);
    out += '\n';
  }
  return out;
}

}  // namespace relviz
