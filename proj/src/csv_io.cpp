#include "betula/csv_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "betula/error.hpp"
#include "text_format.hpp"

namespace betula {

namespace {

struct NumericTable {
  std::size_t columns = 0;
  std::vector<double> values;
  std::vector<std::size_t> line_of_row;
};

// Header detection applies to the first non-blank line only.
NumericTable read_numeric_table(std::istream& in, bool allow_header) {
  NumericTable table;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string_view> cells = detail::split_csv(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (std::string_view cell : cells) {
      const auto v = detail::parse_double(cell);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first && allow_header) {
        first = false;
        continue;
      }
      throw ParseError(lineno, "non-numeric field");
    }
    first = false;
    if (table.columns == 0) {
      table.columns = row.size();
    } else if (row.size() != table.columns) {
      throw ParseError(lineno, "expected " + std::to_string(table.columns) + " fields, found " +
                                   std::to_string(row.size()));
    }
    table.values.insert(table.values.end(), row.begin(), row.end());
    table.line_of_row.push_back(lineno);
  }
  return table;
}

template <class Fn>
auto with_input(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return fn(in);
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  fn(out);
  if (!out) throw InvalidInput("failed writing " + path);
}

}  // namespace

Dataset read_csv(std::istream& in) {
  NumericTable table = read_numeric_table(in, true);
  if (table.values.empty()) return Dataset();
  for (std::size_t r = 0; r < table.line_of_row.size(); ++r) {
    for (std::size_t c = 0; c < table.columns; ++c) {
      if (!std::isfinite(table.values[r * table.columns + c])) throw ParseError(table.line_of_row[r], "non-finite value");
    }
  }
  return Dataset(table.columns, std::move(table.values));
}

Dataset read_csv(const std::string& path) {
  return with_input(path, [](std::istream& in) { return read_csv(in); });
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data[i];
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d) out << ',';
      out << detail::format_double(p[d]);
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const Dataset& data) {
  with_output(path, [&](std::ostream& out) { write_csv(out, data); });
}

void write_leaves_csv(std::ostream& out, std::span<const ClusterFeature> leaves) {
  const std::size_t dim = leaves.empty() ? 0 : leaves.front().dim();
  out << 'n';
  for (std::size_t d = 1; d <= dim; ++d) out << ",mu_" << d;
  out << ",sse\n";
  for (const auto& cf : leaves) {
    out << detail::format_double(cf.weight());
    for (double m : cf.mean()) out << ',' << detail::format_double(m);
    out << ',' << detail::format_double(cf.sse()) << '\n';
  }
}

void write_leaves_csv(const std::string& path, std::span<const ClusterFeature> leaves) {
  with_output(path, [&](std::ostream& out) { write_leaves_csv(out, leaves); });
}

std::vector<ClusterFeature> read_leaves_csv(std::istream& in) {
  const NumericTable table = read_numeric_table(in, true);
  std::vector<ClusterFeature> out;
  if (table.values.empty()) return out;
  if (table.columns < 3) throw ParseError(table.line_of_row.front(), "leaf rows need n, a mean and sse");
  for (std::size_t r = 0; r < table.line_of_row.size(); ++r) {
    const double* row = table.values.data() + r * table.columns;
    try {
      out.emplace_back(row[0], Vector(row + 1, row + table.columns - 1), row[table.columns - 1]);
    } catch (const InvalidInput& e) {
      throw ParseError(table.line_of_row[r], e.what());
    }
  }
  return out;
}

std::vector<ClusterFeature> read_leaves_csv(const std::string& path) {
  return with_input(path, [](std::istream& in) { return read_leaves_csv(in); });
}

void write_labels_csv(std::ostream& out, std::span<const std::size_t> labels) {
  out << "item_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

void write_labels_csv(const std::string& path, std::span<const std::size_t> labels) {
  with_output(path, [&](std::ostream& out) { write_labels_csv(out, labels); });
}

std::vector<std::size_t> read_labels_csv(std::istream& in) {
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 2) throw ParseError(lineno, "expected item_id,label");
    const auto id = detail::parse_size(cells[0]);
    const auto label = detail::parse_size(cells[1]);
    if (!id || !label) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError(lineno, "non-integer field");
    }
    first = false;
    if (*id != labels.size()) throw ParseError(lineno, "item ids must be consecutive from 0");
    labels.push_back(*label);
  }
  return labels;
}

std::vector<std::size_t> read_labels_csv(const std::string& path) {
  return with_input(path, [](std::istream& in) { return read_labels_csv(in); });
}

}  // namespace betula
