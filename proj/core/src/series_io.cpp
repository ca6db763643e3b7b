#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ccc/csv.hpp"
#include "ccc/experiment.hpp"

namespace ccc::experiment {

const std::vector<double>& SeriesTable::column(const std::string& name) const {
  const auto it = columns.find(name);
  if (it == columns.end()) throw std::out_of_range("SeriesTable: no column " + name);
  return it->second;
}

void write_series(std::ostream& os, const SeriesTable& table) {
  os << "t";
  for (const auto& name : kSeriesColumns) os << ',' << name;
  os << '\n';
  for (int r = 0; r < table.rows(); ++r) {
    os << table.t[r];
    for (const auto& name : kSeriesColumns) os << ',' << csv::format_double(table.column(name)[r]);
    os << '\n';
  }
}

SeriesTable read_series(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_series: empty input");
  const auto header = csv::split(line);
  if (header.empty() || header[0] != "t") {
    throw std::invalid_argument("read_series: first column must be t");
  }
  SeriesTable table;
  for (std::size_t i = 1; i < header.size(); ++i) table.columns[header[i]];
  while (std::getline(is, line)) {
    if (csv::is_blank(line)) continue;
    const auto f = csv::split(line);
    if (f.size() != header.size()) throw std::invalid_argument("read_series: ragged row");
    table.t.push_back(static_cast<int>(csv::parse_double(f[0])));
    for (std::size_t i = 1; i < f.size(); ++i) {
      table.columns[header[i]].push_back(csv::parse_double(f[i]));
    }
  }
  return table;
}

double upper_percentile(std::vector<double> values, double p) {
  if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("upper_percentile: p outside (0, 100]");
  if (values.empty()) throw std::invalid_argument("upper_percentile: no values");
  const auto count = static_cast<double>(values.size());
  auto k = static_cast<std::size_t>(std::ceil(p / 100.0 * count - 1e-9));
  k = std::clamp<std::size_t>(k, 1, values.size());
  // k-th largest = element k-1 in descending order.
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   values.end(), std::greater<>());
  return values[k - 1];
}

SeriesTable aggregate(const std::vector<SeriesTable>& runs, double p) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  const int rows = runs.front().rows();
  for (const auto& r : runs) {
    if (r.rows() != rows) throw std::invalid_argument("aggregate: runs differ in length");
  }
  SeriesTable out;
  out.t = runs.front().t;
  std::vector<double> sample(runs.size());
  for (const auto& name : kSeriesColumns) {
    auto& col = out.columns[name];
    col.resize(rows);
    for (int r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < runs.size(); ++k) sample[k] = runs[k].column(name)[r];
      col[r] = upper_percentile(sample, p);
    }
  }
  return out;
}

}  // namespace ccc::experiment
