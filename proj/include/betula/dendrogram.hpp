#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace betula {

/// One agglomeration step. Initial clusters are ids 0..n0-1; merge k of a
/// dendrogram creates id n0+k.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  double size = 0.0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Dendrogram {
  std::size_t n0 = 0;
  std::vector<Merge> merges;
  /// Linkage or criterion name, informational.
  std::string method;
  /// Heights are squared distances.
  bool squared = false;

  /// Copy with sqrt applied to squared heights (negative rounding noise is
  /// clamped to zero first); unchanged when heights are not squared.
  Dendrogram presented() const;

  /// Throws InvalidInput when ids are out of range or reused, the merge
  /// count is not n0-1, or a merge size is not the sum of its children.
  /// `initial_sizes` empty means unit sizes.
  void validate(const std::vector<double>& initial_sizes = {}) const;

  /// Number of k with height(k) < height(k-1).
  std::size_t inversions() const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

/// CSV: a `# n0=<N0> linkage=<name> squared=<bool>` line, then one
/// `left_id,right_id,height,size` row per merge. Heights are written in
/// shortest round-trip form.
void write_dendrogram(std::ostream& out, const Dendrogram& d);
void write_dendrogram(const std::string& path, const Dendrogram& d);
/// Throws ParseError with the offending line.
Dendrogram read_dendrogram(std::istream& in);
Dendrogram read_dendrogram(const std::string& path);

}  // namespace betula
