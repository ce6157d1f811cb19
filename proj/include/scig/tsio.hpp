#pragma once

// Delimited-text ingestion and the log-ratio / detrend / unit-power preprocessing.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scig/diagnostics.hpp"
#include "scig/errors.hpp"
#include "scig/linalg.hpp"
#include "scig/spectral.hpp"

namespace scig {

/// Header labels plus values; missing cells are NaN.
struct RawTable {
  std::vector<std::string> labels;
  Matrix values;
};

enum class ColumnLayout { node_major, attribute_major };
enum class MissingPolicy { reject, forward_fill };

inline ColumnLayout parse_layout(const std::string& name) {
  if (name == "node-major" || name == "node_major") return ColumnLayout::node_major;
  if (name == "attribute-major" || name == "attribute_major") return ColumnLayout::attribute_major;
  fail(ErrorKind::invalid_config, "unknown column layout '" + name + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delimiter)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  return cells;
}

}  // namespace detail

/// First row: unique column labels. Each later row: one time step. Empty cells and
/// "NA" are missing.
inline RawTable read_table(std::istream& in, char delimiter = ',') {
  RawTable table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::invalid_input, "input is empty");
  table.labels = detail::split(line, delimiter);
  std::set<std::string> seen;
  for (const auto& label : table.labels)
    require(seen.insert(label).second, ErrorKind::invalid_input, "duplicate column label '" + label + "'");

  const std::size_t cols = table.labels.size();
  std::vector<double> flat;
  std::size_t rows = 0;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, delimiter);
    require(cells.size() == cols, ErrorKind::invalid_input,
            "line " + std::to_string(line_number) + " has " + std::to_string(cells.size()) + " cells, expected " +
                std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& cell = cells[c];
      if (cell.empty() || cell == "NA") {
        flat.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == cell.size() && std::isfinite(value), ErrorKind::invalid_input,
              "line " + std::to_string(line_number) + ", column '" + table.labels[c] + "': cannot parse '" + cell + "'");
      flat.push_back(value);
    }
    ++rows;
  }
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * cols + c];
  return table;
}

/// Reorders columns into node-major channel order and resolves missing cells.
inline MultiAttributeSeries to_series(const RawTable& table, ColumnLayout layout, int p, int m,
                                      MissingPolicy policy = MissingPolicy::reject) {
  require(p >= 1 && m >= 1, ErrorKind::invalid_input, "p and m must be >= 1");
  require(table.values.cols() == static_cast<Eigen::Index>(p) * m, ErrorKind::invalid_input,
          "table has " + std::to_string(table.values.cols()) + " columns, expected m*p = " + std::to_string(m * p));
  Matrix data(table.values.rows(), table.values.cols());
  for (int j = 0; j < p; ++j) {
    for (int u = 0; u < m; ++u) {
      const int source = layout == ColumnLayout::node_major ? j * m + u : u * p + j;
      data.col(j * m + u) = table.values.col(source);
    }
  }
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
      if (!std::isnan(data(r, c))) continue;
      const int j = static_cast<int>(c) / m;
      const int u = static_cast<int>(c) % m;
      const int source = layout == ColumnLayout::node_major ? j * m + u : u * p + j;
      const std::string where =
          "row " + std::to_string(r + 1) + ", column '" + table.labels[static_cast<std::size_t>(source)] + "'";
      require(policy == MissingPolicy::forward_fill, ErrorKind::missing_value, "missing value at " + where);
      require(r > 0, ErrorKind::missing_value, "cannot forward-fill the first row at " + where);
      data(r, c) = data(r - 1, c);
    }
  }
  return MultiAttributeSeries(std::move(data), p, m);
}

inline MultiAttributeSeries load_series(const std::string& path, ColumnLayout layout, int p, int m,
                                        MissingPolicy policy = MissingPolicy::reject, char delimiter = ',') {
  std::ifstream in(path);
  require(in.good(), ErrorKind::invalid_input, "cannot open '" + path + "'");
  return to_series(read_table(in, delimiter), layout, p, m, policy);
}

/// Node-major CSV with labels n<j>_a<u> (1-based), 17 significant digits.
inline void write_series(std::ostream& out, const MultiAttributeSeries& series) {
  const int m = series.attributes();
  for (int c = 0; c < series.channels(); ++c) {
    if (c > 0) out << ',';
    out << 'n' << c / m + 1 << "_a" << c % m + 1;
  }
  out << '\n' << std::setprecision(17);
  for (int t = 0; t < series.samples(); ++t) {
    for (int c = 0; c < series.channels(); ++c) {
      if (c > 0) out << ',';
      out << series.data()(t, c);
    }
    out << '\n';
  }
}

struct PreprocessOptions {
  double shift_fraction = 1e-6;  // delta = shift_fraction * channel max
};

/// Per channel: positive shift if needed, log ratio ln(x(t)/x(t-1)), removal of the
/// least-squares line in t, scaling to unit mean square. Output has n - 1 rows.
inline MultiAttributeSeries preprocess(const MultiAttributeSeries& series, const PreprocessOptions& options = {}) {
  const int n = series.samples();
  require(n >= 3, ErrorKind::invalid_input, "preprocessing needs at least three samples");
  const int len = n - 1;
  Matrix out(len, series.channels());

  Vector t = Vector::LinSpaced(len, 0.0, static_cast<double>(len - 1));
  const double t_mean = t.mean();
  const Vector tc = t.array() - t_mean;
  const double t_ss = tc.squaredNorm();

  for (int c = 0; c < series.channels(); ++c) {
    Vector x = series.data().col(c);
    if (x.minCoeff() <= 0.0) {
      const double delta = options.shift_fraction * x.maxCoeff();
      x.array() += delta;
      require(x.minCoeff() > 0.0, ErrorKind::invalid_input,
              "channel " + std::to_string(c + 1) + " has non-positive values after the positive shift");
    }
    Vector y(len);
    for (int i = 0; i < len; ++i) y(i) = std::log(x(i + 1) / x(i));

    const double y_mean = y.mean();
    const double slope = tc.dot(y.array().matrix() - Vector::Constant(len, y_mean)) / t_ss;
    y = (y.array() - y_mean - slope * tc.array()).matrix();

    const double power = y.squaredNorm() / len;
    if (power > 1e-24) {
      y /= std::sqrt(power);
    } else {
      y.setZero();
      warn("channel " + std::to_string(c + 1) + " is identically zero after detrending; left unscaled");
    }
    out.col(c) = y;
  }
  return MultiAttributeSeries(std::move(out), series.nodes(), series.attributes());
}

}  // namespace scig
