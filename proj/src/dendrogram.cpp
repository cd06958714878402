#include "betula/dendrogram.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "betula/error.hpp"
#include "text_format.hpp"

namespace betula {

Dendrogram Dendrogram::presented() const {
  Dendrogram out = *this;
  if (!squared) return out;
  for (Merge& m : out.merges) m.height = std::sqrt(std::max(m.height, 0.0));
  out.squared = false;
  return out;
}

void Dendrogram::validate(const std::vector<double>& initial_sizes) const {
  if (n0 == 0) throw InvalidInput("dendrogram has no items");
  if (merges.size() + 1 != n0) throw InvalidInput("dendrogram must have n0-1 merges");
  if (!initial_sizes.empty() && initial_sizes.size() != n0) throw InvalidInput("initial size count != n0");
  std::vector<double> size(n0 + merges.size(), 1.0);
  for (std::size_t i = 0; i < initial_sizes.size(); ++i) size[i] = initial_sizes[i];
  std::vector<char> used(n0 + merges.size(), 0);
  for (std::size_t k = 0; k < merges.size(); ++k) {
    const Merge& m = merges[k];
    const std::size_t created = n0 + k;
    for (std::size_t id : {m.left, m.right}) {
      if (id >= created) throw InvalidInput("merge " + std::to_string(k) + " refers to a cluster not yet formed");
      if (used[id]) throw InvalidInput("cluster " + std::to_string(id) + " merged twice");
      used[id] = 1;
    }
    if (m.left == m.right) throw InvalidInput("merge joins a cluster with itself");
    const double expected = size[m.left] + size[m.right];
    if (std::abs(expected - m.size) > 1e-9 * std::max(1.0, expected)) {
      throw InvalidInput("merge " + std::to_string(k) + " size is not the sum of its children");
    }
    size[created] = m.size;
  }
}

std::size_t Dendrogram::inversions() const {
  std::size_t count = 0;
  for (std::size_t k = 1; k < merges.size(); ++k) {
    if (merges[k].height < merges[k - 1].height) ++count;
  }
  return count;
}

void write_dendrogram(std::ostream& out, const Dendrogram& d) {
  out << "# n0=" << d.n0 << " linkage=" << d.method << " squared=" << (d.squared ? "true" : "false") << '\n';
  for (const Merge& m : d.merges) {
    out << m.left << ',' << m.right << ',' << detail::format_double(m.height) << ','
        << detail::format_double(m.size) << '\n';
  }
}

void write_dendrogram(const std::string& path, const Dendrogram& d) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  write_dendrogram(out, d);
  if (!out) throw InvalidInput("failed writing " + path);
}

Dendrogram read_dendrogram(std::istream& in) {
  Dendrogram d;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing dendrogram header");
  ++lineno;
  if (line.rfind("# ", 0) != 0) throw ParseError(lineno, "expected '# n0=... linkage=... squared=...'");
  bool have_n0 = false;
  std::istringstream header(line.substr(2));
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "malformed header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "n0") {
      const auto parsed = detail::parse_size(value);
      if (!parsed) throw ParseError(lineno, "n0 is not an integer");
      d.n0 = *parsed;
      have_n0 = true;
    } else if (key == "linkage") {
      d.method = value;
    } else if (key == "squared") {
      if (value != "true" && value != "false") throw ParseError(lineno, "squared must be true or false");
      d.squared = value == "true";
    }
  }
  if (!have_n0) throw ParseError(lineno, "header lacks n0");

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string_view> cells = detail::split_csv(line);
    if (cells.size() != 4) throw ParseError(lineno, "expected 4 fields, found " + std::to_string(cells.size()));
    const auto left = detail::parse_size(cells[0]);
    const auto right = detail::parse_size(cells[1]);
    const auto height = detail::parse_double(cells[2]);
    const auto size = detail::parse_double(cells[3]);
    if (!left || !right || !height || !size) throw ParseError(lineno, "non-numeric field");
    d.merges.push_back({*left, *right, *height, *size});
  }
  return d;
}

Dendrogram read_dendrogram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_dendrogram(in);
}

}  // namespace betula
