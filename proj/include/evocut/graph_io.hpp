#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evocut/graph.hpp"

namespace evocut {

/// Malformed or unsupported graph input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw InputError("line " + std::to_string(line_no) + ": malformed token '" +
                     std::string(token) + "'");
  return value;
}

inline Graph build_or_throw(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                            std::vector<std::uint64_t> labels) {
  try {
    return Graph(n, edges, std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace detail

/// Parses "u v" lines. Blank lines and lines starting with '#' are skipped.
/// Ids are arbitrary nonnegative integers, compacted in increasing order;
/// the original ids are kept as vertex labels.
inline Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tokens = detail::split_ws(body);
    if (tokens.size() != 2)
      throw InputError("line " + std::to_string(line_no) + ": expected two vertex ids");
    const auto u = detail::parse_id(tokens[0], line_no);
    const auto v = detail::parse_id(tokens[1], line_no);
    if (u == v) throw InputError("line " + std::to_string(line_no) + ": self-loop at " + std::to_string(u));
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw InputError("empty edge set");

  std::map<std::uint64_t, Vertex> dense;
  for (auto [u, v] : raw) {
    dense.emplace(u, 0);
    dense.emplace(v, 0);
  }
  std::vector<std::uint64_t> labels;
  labels.reserve(dense.size());
  for (auto& [label, id] : dense) {
    id = static_cast<Vertex>(labels.size());
    labels.push_back(label);
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(dense[u], dense[v]);
  const std::size_t n = labels.size();
  return detail::build_or_throw(n, edges, std::move(labels));
}

inline Graph load_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

/// Unweighted METIS: header "n m [fmt]", then line i lists the 1-indexed
/// neighbors of vertex i. '%' starts a comment line. Vertex i gets label i-1.
inline Graph load_metis(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& body) {
    while (std::getline(in, line)) {
      ++line_no;
      body = detail::trim(line);
      if (!body.empty() && body.front() == '%') continue;
      return true;
    }
    return false;
  };

  std::string_view body;
  do {
    if (!next_line(body)) throw InputError("missing METIS header");
  } while (body.empty());
  auto header = detail::split_ws(body);
  if (header.size() < 2 || header.size() > 3) throw InputError("malformed METIS header");
  const auto n = detail::parse_id(header[0], line_no);
  const auto m = detail::parse_id(header[1], line_no);
  if (header.size() == 3 && detail::parse_id(header[2], line_no) != 0)
    throw InputError("weighted METIS formats are not supported");
  if (n == 0 || m == 0) throw InputError("empty edge set");

  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (!next_line(body)) throw InputError("METIS file ends before vertex " + std::to_string(v + 1));
    for (auto tok : detail::split_ws(body)) {
      const auto w = detail::parse_id(tok, line_no);
      if (w == 0 || w > n) throw InputError("line " + std::to_string(line_no) + ": neighbor out of range");
      const auto u = static_cast<Vertex>(v);
      const auto x = static_cast<Vertex>(w - 1);
      if (u == x) throw InputError("line " + std::to_string(line_no) + ": self-loop");
      arcs.emplace_back(u, x);
    }
  }
  while (next_line(body))
    if (!body.empty()) throw InputError("line " + std::to_string(line_no) + ": trailing data");
  if (arcs.size() != 2 * m) throw InputError("METIS edge count does not match header");
  std::vector<std::pair<Vertex, Vertex>> sorted_arcs = arcs;
  std::sort(sorted_arcs.begin(), sorted_arcs.end());
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, x] : arcs) {
    if (!std::binary_search(sorted_arcs.begin(), sorted_arcs.end(), std::pair{x, u}))
      throw InputError("asymmetric adjacency between " + std::to_string(u + 1) + " and " +
                       std::to_string(x + 1));
    if (u < x) edges.emplace_back(u, x);
  }

  std::vector<std::uint64_t> labels(n);
  for (std::uint64_t v = 0; v < n; ++v) labels[v] = v;
  return detail::build_or_throw(n, edges, std::move(labels));
}

inline Graph load_metis(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_metis(in);
}

enum class GraphFormat { EdgeList, Metis };

inline Graph load_graph_file(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return format == GraphFormat::Metis ? load_metis(in) : load_edge_list(in);
}

/// One "u v" line per edge, using vertex labels.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

/// Dense ids, 1-indexed. Labels are not preserved.
inline void write_metis(const Graph& g, std::ostream& out) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    bool first = true;
    for (Vertex w : g.neighbors(v)) {
      out << (first ? "" : " ") << (w + 1);
      first = false;
    }
    out << '\n';
  }
}

}  // namespace evocut
