#include "fincon/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "fincon/error.hpp"
#include "json.hpp"

namespace fincon {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long parse_int(std::string_view tok, int line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return value;
}

Edge checked_edge(long a, long b, long n, int line) {
  if (a < 1 || b < 1 || a > n || b > n)
    throw ParseError(line, "endpoint out of range 1.." + std::to_string(n));
  if (a == b) throw ParseError(line, "self-loop at vertex " + std::to_string(a));
  return Edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(text.substr(pos, end - pos), line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

Graph parse_dimacs(std::string_view text) {
  long n = -1;
  std::vector<Edge> edges;
  for_each_line(text, [&](std::string_view line, int no) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") return;
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError(no, "duplicate problem line");
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
        throw ParseError(no, "malformed problem line, expected 'p edge <n> <m>'");
      n = parse_int(tok[2], no);
      if (n < 0) throw ParseError(no, "negative vertex count");
      parse_int(tok[3], no);
      return;
    }
    if (tok[0] == "e") {
      if (n < 0) throw ParseError(no, "edge line before problem line");
      if (tok.size() != 3) throw ParseError(no, "malformed edge line, expected 'e <i> <j>'");
      edges.push_back(checked_edge(parse_int(tok[1], no), parse_int(tok[2], no), n, no));
      return;
    }
    throw ParseError(no, "unknown line type '" + std::string(tok[0]) + "'");
  });
  if (n < 0) throw ParseError(1, "missing problem line");
  return Graph(static_cast<int>(n), edges);
}

Graph parse_edge_list(std::string_view text, std::optional<int> vertex_count) {
  std::optional<long> n;
  if (vertex_count) n = *vertex_count;
  bool seen_content = false;
  std::vector<std::pair<std::pair<long, long>, int>> raw;
  for_each_line(text, [&](std::string_view line, int no) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) return;
    if (tok[0].starts_with("n=")) {
      if (seen_content) throw ParseError(no, "'n=' header must precede the edges");
      if (tok.size() != 1) throw ParseError(no, "malformed header, expected 'n=<count>'");
      long header = parse_int(tok[0].substr(2), no);
      if (header < 0) throw ParseError(no, "negative vertex count");
      if (!vertex_count) n = header;
      seen_content = true;
      return;
    }
    seen_content = true;
    if (tok.size() != 2) throw ParseError(no, "expected '<i> <j>'");
    raw.push_back({{parse_int(tok[0], no), parse_int(tok[1], no)}, no});
  });
  long count = 0;
  if (n) {
    count = *n;
  } else {
    for (const auto& [e, no] : raw) count = std::max({count, e.first, e.second});
  }
  std::vector<Edge> edges;
  for (const auto& [e, no] : raw) edges.push_back(checked_edge(e.first, e.second, count, no));
  return Graph(static_cast<int>(count), edges);
}

Graph parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer())
    throw ParseError(1, "expected an object with integer field \"n\"");
  long n = doc["n"].get<long>();
  if (n < 0) throw ParseError(1, "negative vertex count");
  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError(1, "\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw ParseError(1, "each edge must be a pair of integers");
      edges.push_back(checked_edge(e[0].get<long>(), e[1].get<long>(), n, 1));
    }
  }
  return Graph(static_cast<int>(n), edges);
}

}  // namespace

Graph parse_graph(std::string_view text, GraphFormat format, std::optional<int> vertex_count) {
  switch (format) {
    case GraphFormat::Dimacs: return parse_dimacs(text);
    case GraphFormat::EdgeList: return parse_edge_list(text, vertex_count);
    case GraphFormat::Json: return parse_json(text);
  }
  throw std::logic_error("unhandled graph format");
}

GraphFormat format_from_path(const std::string& path) {
  auto ends = [&](std::string_view suffix) { return std::string_view(path).ends_with(suffix); };
  if (ends(".col") || ends(".dimacs") || ends(".clq")) return GraphFormat::Dimacs;
  if (ends(".json")) return GraphFormat::Json;
  return GraphFormat::EdgeList;
}

std::optional<GraphFormat> format_from_name(std::string_view name) {
  if (name == "dimacs") return GraphFormat::Dimacs;
  if (name == "edge-list" || name == "edgelist") return GraphFormat::EdgeList;
  if (name == "json") return GraphFormat::Json;
  return std::nullopt;
}

Graph read_graph_file(const std::string& path, std::optional<GraphFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str(), format.value_or(format_from_path(path)));
}

std::string write_graph(const Graph& g, GraphFormat format) {
  std::ostringstream out;
  switch (format) {
    case GraphFormat::Dimacs:
      out << "p edge " << g.n() << ' ' << g.edge_count() << '\n';
      for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << '\n';
      break;
    case GraphFormat::EdgeList:
      out << "n=" << g.n() << '\n';
      for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
      break;
    case GraphFormat::Json: {
      nlohmann::json edges = nlohmann::json::array();
      for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
      out << nlohmann::json{{"n", g.n()}, {"edges", edges}}.dump() << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace fincon
