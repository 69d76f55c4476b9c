#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "evt/powerset.hpp"

namespace evt {

// Line-oriented text formats. Lines whose first non-blank character is '#'
// are comments, blank lines are ignored. The first remaining line is
//
//   events <name> <name> ...
//
// followed by exactly one row per subset, in any order. A row starts with a
// bitstring of length n whose k-th character (from the left) is '1' iff the
// k-th listed event belongs to the subset.
//
// Model rows:        <bitstring> <value> <pstar>
// Distribution rows: <bitstring> <prob>
//
// Distribution files may carry a metadata comment `# alpha=<a> logZ=<z> H=<h>`
// (any subset of the keys). All errors are ParseError with a 1-based position.

struct ModelContent {
  EventSet events;
  ValueFunction value;
  PowersetDistribution base;
};

struct DistMetadata {
  std::optional<double> alpha;
  std::optional<double> log_z;
  std::optional<double> entropy;
};

struct DistContent {
  PowersetDistribution distribution;
  DistMetadata metadata;
};

ModelContent parse_model(std::string_view text);
DistContent parse_dist(std::string_view text);

// Probabilities are printed with 17 significant digits so that parsing the
// output reproduces every entry bit for bit.
std::string emit_dist(const PowersetDistribution& p, const DistMetadata& metadata = {});
std::string emit_model(const ValueFunction& value, const PowersetDistribution& base);

std::string bitstring(SubsetMask x, std::size_t n);
// Shortest-exact round-trippable decimal (17 significant digits).
std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);
ModelContent read_model_file(const std::filesystem::path& path);
DistContent read_dist_file(const std::filesystem::path& path);

}  // namespace evt
