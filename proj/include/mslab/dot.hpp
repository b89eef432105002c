#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mslab {

namespace detail {
inline std::string dot_quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + "\"";
}
} // namespace detail

/// Hasse diagram as a DOT digraph; edges point from lower to upper element.
inline void write_dot(std::ostream &os, const std::string &graph,
                      const std::vector<std::string> &labels,
                      const std::vector<std::pair<std::size_t, std::size_t>> &covers) {
  os << "digraph " << detail::dot_quote(graph) << " {\n";
  os << "  rankdir=BT;\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    os << "  n" << i << " [label=" << detail::dot_quote(labels[i]) << "];\n";
  for (const auto &[lo, hi] : covers)
    os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
}

inline std::string to_dot(const std::string &graph,
                          const std::vector<std::string> &labels,
                          const std::vector<std::pair<std::size_t, std::size_t>> &covers) {
  std::ostringstream os;
  write_dot(os, graph, labels, covers);
  return os.str();
}

} // namespace mslab
