#pragma once

// Plain-text graph files.
//
// Edge list:                     Observed (ternary) list:
//   # hsbm adjacency               # hsbm observed
//   n m                            n m
//   i j      (m lines)             i j v    (m lines, v in {0,1})
//
// Indices are 0-based with i < j; writers emit pairs in lexicographic order.
// '#' starts a comment, on its own line or after the fields. In the observed
// format every listed pair is observed and absent pairs are unobserved; in
// the edge-list format absent pairs are zeros.

#include "hsbm/graph.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace hsbm {

class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GraphFormat { adjacency, observed };

inline void write_adjacency(std::ostream& os, const Adjacency& a) {
  os << "# hsbm adjacency\n" << a.n() << ' ' << a.edge_count() << '\n';
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i + 1; j < a.n(); ++j)
      if (a(i, j)) os << i << ' ' << j << '\n';
}

inline void write_observed(std::ostream& os, const ObservedMatrix& m) {
  os << "# hsbm observed\n" << m.n() << ' ' << m.observed_pairs() << '\n';
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = i + 1; j < m.n(); ++j) {
      const Entry e = m(i, j);
      if (e != Entry::unobserved) os << i << ' ' << j << ' ' << (e == Entry::one ? 1 : 0) << '\n';
    }
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next non-empty, non-comment line with any trailing comment removed;
  /// false at end of input.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++number_;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '#') {
        comments_ += line.substr(pos) + '\n';
        continue;
      }
      line.erase(std::min(line.size(), line.find('#')));
      return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }
  const std::string& comments() const { return comments_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw GraphFormatError("line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& is_;
  std::size_t number_ = 0;
  std::string comments_;
};

inline std::vector<long long> parse_fields(const std::string& line, LineReader& reader) {
  std::istringstream ss(line);
  std::vector<long long> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      reader.fail("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) reader.fail("expected an integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

struct Header {
  std::size_t n = 0;
  std::size_t m = 0;
};

inline Header read_header(LineReader& reader) {
  std::string line;
  if (!reader.next(line)) reader.fail("missing 'n m' header");
  const auto f = parse_fields(line, reader);
  if (f.size() != 2 || f[0] <= 0 || f[1] < 0) reader.fail("header must be 'n m' with n > 0");
  return {std::size_t(f[0]), std::size_t(f[1])};
}

inline void check_pair(long long i, long long j, std::size_t n, LineReader& reader) {
  if (i < 0 || j < 0 || std::size_t(i) >= n || std::size_t(j) >= n)
    reader.fail("node index out of range");
  if (i == j) reader.fail("self loops are not allowed");
}

}  // namespace detail

inline Adjacency read_adjacency(std::istream& is) {
  detail::LineReader reader(is);
  const auto h = detail::read_header(reader);
  Adjacency a(h.n);
  std::string line;
  std::size_t seen = 0;
  while (reader.next(line)) {
    const auto f = detail::parse_fields(line, reader);
    if (f.size() != 2) reader.fail("edge lines must be 'i j'");
    detail::check_pair(f[0], f[1], h.n, reader);
    if (a(std::size_t(f[0]), std::size_t(f[1]))) reader.fail("duplicate edge");
    a.set_edge(std::size_t(f[0]), std::size_t(f[1]));
    ++seen;
  }
  if (seen != h.m)
    throw GraphFormatError("header announces " + std::to_string(h.m) + " edges, found " +
                           std::to_string(seen));
  return a;
}

inline ObservedMatrix read_observed(std::istream& is) {
  detail::LineReader reader(is);
  const auto h = detail::read_header(reader);
  ObservedMatrix m(h.n);
  std::string line;
  std::size_t seen = 0;
  while (reader.next(line)) {
    const auto f = detail::parse_fields(line, reader);
    if (f.size() != 3) reader.fail("observed lines must be 'i j v'");
    detail::check_pair(f[0], f[1], h.n, reader);
    if (f[2] != 0 && f[2] != 1) reader.fail("observed value must be 0 or 1");
    if (m(std::size_t(f[0]), std::size_t(f[1])) != Entry::unobserved)
      reader.fail("duplicate pair");
    m.set(std::size_t(f[0]), std::size_t(f[1]), f[2] == 1 ? Entry::one : Entry::zero);
    ++seen;
  }
  if (seen != h.m)
    throw GraphFormatError("header announces " + std::to_string(h.m) + " pairs, found " +
                           std::to_string(seen));
  return m;
}

/// Reads either format. The "# hsbm observed" marker, or three fields on
/// the first data line, selects the ternary reader.
inline std::variant<Adjacency, ObservedMatrix> read_graph(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  bool observed = text.find("# hsbm observed") != std::string::npos;
  if (!observed) {
    std::istringstream probe(text);
    detail::LineReader reader(probe);
    std::string line;
    if (reader.next(line) && reader.next(line))
      observed = detail::parse_fields(line, reader).size() == 3;
  }
  std::istringstream in(text);
  if (observed) return read_observed(in);
  return read_adjacency(in);
}

}  // namespace hsbm
