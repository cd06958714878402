#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "betula/cluster_feature.hpp"
#include "betula/dataset.hpp"

namespace betula {

/// Rows of comma-separated numbers. A first line with any non-numeric cell
/// is taken as a header and skipped; blank lines are ignored. Throws
/// ParseError naming the line for ragged rows or non-numeric cells.
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::string& path);

/// Shortest round-trip formatting, so read_csv(write_csv(x)) == x.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::string& path, const Dataset& data);

/// Leaf dump: header `n,mu_1,...,mu_d,sse`, one row per feature.
void write_leaves_csv(std::ostream& out, std::span<const ClusterFeature> leaves);
void write_leaves_csv(const std::string& path, std::span<const ClusterFeature> leaves);
std::vector<ClusterFeature> read_leaves_csv(std::istream& in);
std::vector<ClusterFeature> read_leaves_csv(const std::string& path);

/// Labels: header `item_id,label`, rows in item order.
void write_labels_csv(std::ostream& out, std::span<const std::size_t> labels);
void write_labels_csv(const std::string& path, std::span<const std::size_t> labels);
/// Throws ParseError unless item ids run 0, 1, 2, ... in order.
std::vector<std::size_t> read_labels_csv(std::istream& in);
std::vector<std::size_t> read_labels_csv(const std::string& path);

}  // namespace betula
