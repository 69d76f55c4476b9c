#include "evt/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "evt/error.hpp"

namespace evt {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<Token> tokens;
  bool comment = false;
  std::string_view raw;
};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    Line line;
    line.number = ++number;
    line.raw = text.substr(pos, end - pos);
    std::size_t i = 0;
    while (i < line.raw.size()) {
      while (i < line.raw.size() && is_blank(line.raw[i])) ++i;
      if (i >= line.raw.size()) break;
      const std::size_t start = i;
      while (i < line.raw.size() && !is_blank(line.raw[i])) ++i;
      line.tokens.push_back({line.raw.substr(start, i - start), start + 1});
    }
    line.comment = !line.tokens.empty() && line.tokens.front().text.front() == '#';
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(const Token& token, std::size_t line) {
  std::string_view s = token.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value) || s.empty()) {
    throw ParseError(Errc::kSyntax, line, token.column,
                     "expected a finite decimal number, got '" + std::string(token.text) + "'");
  }
  return value;
}

struct Header {
  EventSet events;
  std::size_t line = 0;
};

// Parses up to and including the `events` line; returns the index of the
// next line to read.
std::pair<Header, std::size_t> parse_header(const std::vector<Line>& lines) {
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.comment || line.tokens.empty()) continue;
    const Token& head = line.tokens.front();
    if (head.text != "events") {
      throw ParseError(Errc::kSyntax, line.number, head.column, "expected 'events' header");
    }
    if (line.tokens.size() == 1) {
      throw ParseError(Errc::kSyntax, line.number, head.column + head.text.size(),
                       "header lists no events");
    }
    if (line.tokens.size() - 1 > kMaxEvents) {
      throw ParseError(Errc::kTooManyEvents, line.number, line.tokens[kMaxEvents + 1].column,
                       std::to_string(line.tokens.size() - 1) + " events, at most " +
                           std::to_string(kMaxEvents) + " supported");
    }
    std::vector<std::string> names;
    for (std::size_t t = 1; t < line.tokens.size(); ++t) {
      const std::string name(line.tokens[t].text);
      for (const auto& prior : names) {
        if (prior == name) {
          throw ParseError(Errc::kInvalidEventSet, line.number, line.tokens[t].column,
                           "duplicate event '" + name + "'");
        }
      }
      names.push_back(name);
    }
    return {Header{EventSet(std::move(names)), line.number}, k + 1};
  }
  const std::size_t last = lines.empty() ? 1 : lines.back().number;
  throw ParseError(Errc::kSyntax, last, 1, "missing 'events' header");
}

SubsetMask parse_bitstring(const Token& token, std::size_t n, std::size_t line) {
  if (token.text.size() != n) {
    throw ParseError(Errc::kBadBitstring, line, token.column,
                     "bitstring '" + std::string(token.text) + "' has length " +
                         std::to_string(token.text.size()) + ", expected " + std::to_string(n));
  }
  std::uint32_t bits = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const char c = token.text[k];
    if (c == '1') {
      bits |= std::uint32_t{1} << k;
    } else if (c != '0') {
      throw ParseError(Errc::kBadBitstring, line, token.column + k,
                       std::string("bitstring character '") + c + "' is not 0 or 1");
    }
  }
  return SubsetMask(bits);
}

// Shared row machinery; `columns` is the number of reals after the bitstring.
struct Rows {
  std::vector<std::vector<double>> columns;
  std::vector<std::size_t> row_line;    // by mask
  std::vector<std::size_t> value_col;   // column of each real, by mask and field
  std::size_t last_line = 0;
};

template <typename OnComment>
Rows parse_rows(const std::vector<Line>& lines, std::size_t first, const EventSet& events,
                std::size_t fields, OnComment&& on_comment) {
  const std::size_t atoms = events.atom_count();
  Rows rows;
  rows.columns.assign(fields, std::vector<double>(atoms, 0.0));
  rows.row_line.assign(atoms, 0);
  rows.value_col.assign(atoms * fields, 0);
  rows.last_line = first == 0 ? 1 : lines[first - 1].number;
  for (std::size_t k = first; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.comment) {
      on_comment(line);
      continue;
    }
    if (line.tokens.empty()) continue;
    rows.last_line = line.number;
    if (line.tokens.size() != fields + 1) {
      const std::size_t col = line.tokens.size() > fields + 1
                                  ? line.tokens[fields + 1].column
                                  : line.raw.size() + 1;
      throw ParseError(Errc::kSyntax, line.number, col,
                       "expected " + std::to_string(fields + 1) + " fields, got " +
                           std::to_string(line.tokens.size()));
    }
    const SubsetMask mask = parse_bitstring(line.tokens[0], events.size(), line.number);
    if (rows.row_line[mask.index()] != 0) {
      throw ParseError(Errc::kDuplicateMask, line.number, line.tokens[0].column,
                       "mask " + std::string(line.tokens[0].text) + " already given on line " +
                           std::to_string(rows.row_line[mask.index()]));
    }
    rows.row_line[mask.index()] = line.number;
    for (std::size_t f = 0; f < fields; ++f) {
      rows.columns[f][mask.index()] = parse_real(line.tokens[f + 1], line.number);
      rows.value_col[mask.index() * fields + f] = line.tokens[f + 1].column;
    }
  }
  for (std::size_t i = 0; i < atoms; ++i) {
    if (rows.row_line[i] == 0) {
      throw ParseError(Errc::kMissingMask, rows.last_line, 1,
                       "no row for mask " + bitstring(SubsetMask(static_cast<std::uint32_t>(i)),
                                                      events.size()));
    }
  }
  return rows;
}

PowersetDistribution checked_probabilities(const Rows& rows, std::size_t field, std::size_t fields,
                                           const EventSet& events) {
  const auto& probs = rows.columns[field];
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0) {
      throw ParseError(Errc::kNegativeProbability, rows.row_line[i],
                       rows.value_col[i * fields + field], "negative probability");
    }
  }
  try {
    return validate_distribution(probs, events);
  } catch (const Error& e) {
    throw ParseError(e.code(), rows.last_line, 1, e.what());
  }
}

void append_row(std::string& out, SubsetMask x, std::size_t n, std::initializer_list<double> xs) {
  out += bitstring(x, n);
  for (double v : xs) {
    out += ' ';
    out += format_real(v);
  }
  out += '\n';
}

std::string header_line(const EventSet& events) {
  std::string out = "events";
  for (const auto& name : events.names()) {
    out += ' ';
    out += name;
  }
  out += '\n';
  return out;
}

}  // namespace

std::string bitstring(SubsetMask x, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t k = 0; k < n; ++k) {
    if (x.contains(k)) s[k] = '1';
  }
  return s;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ModelContent parse_model(std::string_view text) {
  const auto lines = split_lines(text);
  auto [header, next] = parse_header(lines);
  const auto rows = parse_rows(lines, next, header.events, 2, [](const Line&) {});
  const auto& values = rows.columns[0];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) {
      throw ParseError(Errc::kNegativeValue, rows.row_line[i], rows.value_col[i * 2],
                       "negative value");
    }
  }
  auto base = checked_probabilities(rows, 1, 2, header.events);
  return ModelContent{header.events, ValueFunction(header.events, values), std::move(base)};
}

DistContent parse_dist(std::string_view text) {
  const auto lines = split_lines(text);
  auto [header, next] = parse_header(lines);
  DistMetadata metadata;
  auto on_comment = [&](const Line& line) {
    for (std::size_t t = 0; t < line.tokens.size(); ++t) {
      Token token = line.tokens[t];
      if (t == 0) {
        token.text.remove_prefix(1);
        token.column += 1;
      }
      const auto eq = token.text.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = token.text.substr(0, eq);
      std::optional<double>* slot = key == "alpha"  ? &metadata.alpha
                                    : key == "logZ" ? &metadata.log_z
                                    : key == "H"    ? &metadata.entropy
                                                    : nullptr;
      if (slot == nullptr) continue;
      const Token value{token.text.substr(eq + 1), token.column + eq + 1};
      if (value.text == "inf") {
        *slot = std::numeric_limits<double>::infinity();
      } else {
        *slot = parse_real(value, line.number);
      }
    }
  };
  // Metadata comments before the header are honoured too.
  for (std::size_t k = 0; k + 1 < next; ++k) {
    if (lines[k].comment) on_comment(lines[k]);
  }
  const auto rows = parse_rows(lines, next, header.events, 1, on_comment);
  return DistContent{checked_probabilities(rows, 0, 1, header.events), metadata};
}

std::string emit_dist(const PowersetDistribution& p, const DistMetadata& metadata) {
  std::string out = header_line(p.events());
  if (metadata.alpha || metadata.log_z || metadata.entropy) {
    out += '#';
    if (metadata.alpha) out += " alpha=" + format_real(*metadata.alpha);
    if (metadata.log_z) out += " logZ=" + format_real(*metadata.log_z);
    if (metadata.entropy) out += " H=" + format_real(*metadata.entropy);
    out += '\n';
  }
  const std::size_t n = p.events().size();
  for (auto x : enumerate_subsets(p.events())) append_row(out, x, n, {p[x]});
  return out;
}

std::string emit_model(const ValueFunction& value, const PowersetDistribution& base) {
  if (!(value.events() == base.events())) {
    throw Error(Errc::kEventSetMismatch, "value function and base use different events");
  }
  std::string out = header_line(value.events());
  const std::size_t n = value.events().size();
  for (auto x : enumerate_subsets(value.events())) append_row(out, x, n, {value[x], base[x]});
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ModelContent read_model_file(const std::filesystem::path& path) {
  return parse_model(read_text_file(path));
}

DistContent read_dist_file(const std::filesystem::path& path) {
  return parse_dist(read_text_file(path));
}

}  // namespace evt
