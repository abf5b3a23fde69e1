#include "lscale/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "text_io.hpp"

namespace lscale {

FeatureMatrix load_matrix(const std::string& path) {
  auto in = detail::open_or_throw(path);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) detail::fail_at(path, 1, "missing header line");
  ++line_no;
  const auto header = detail::split_ws(line);
  if (header.size() != 2) detail::fail_at(path, line_no, "header must be 'rows cols'");
  const long rows = detail::parse_long(header[0], path, line_no);
  const long cols = detail::parse_long(header[1], path, line_no);
  if (rows < 0 || cols < 0) detail::fail_at(path, line_no, "negative dimensions");

  FeatureMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      detail::fail_at(path, line_no + 1, "unexpected end of file, expected " +
                                             std::to_string(rows) + " rows");
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (static_cast<long>(toks.size()) != cols)
      detail::fail_at(path, line_no,
                      "dimension mismatch: expected " + std::to_string(cols) + " values, got " +
                          std::to_string(toks.size()));
    for (long c = 0; c < cols; ++c) {
      const double v = detail::parse_double(toks[c], path, line_no);
      if (!std::isfinite(v))
        detail::fail_at(path, line_no, "non-finite feature value '" + std::string(toks[c]) + "'");
      m(r, c) = v;
    }
  }
  return m;
}

void save_matrix(const std::string& path, const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace lscale
