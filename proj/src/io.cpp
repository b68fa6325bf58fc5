#include "netdyn/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "netdyn/error.hpp"

namespace netdyn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!current.empty()) fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) fields.push_back(std::move(current));
  return fields;
}

double parse_weight(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("graph", "line " + std::to_string(line_no) + ": bad weight '" + text + "'");
  return value;
}

class NodeTable {
 public:
  std::size_t intern(const std::string& id) {
    auto [it, inserted] = index_.emplace(id, ids_.size());
    if (inserted) ids_.push_back(id);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(ids_); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> ids_;
};

bool looks_like_json(std::istream& in) {
  in >> std::ws;
  return in.peek() == '{';
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  NodeTable nodes;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body);
    if (fields.size() == 1) {
      nodes.intern(fields[0]);
      continue;
    }
    if (fields.size() > 3)
      throw ParseError("graph", "line " + std::to_string(line_no) + ": expected 'src dst [weight]'");
    const std::size_t a = nodes.intern(fields[0]);
    const std::size_t b = nodes.intern(fields[1]);
    const double w = fields.size() == 3 ? parse_weight(fields[2], line_no) : 1.0;
    edges.push_back({a, b, w});
  }
  return Graph(nodes.take(), std::move(edges));
}

Graph read_json_graph(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("graph", std::string("invalid JSON graph: ") + e.what());
  }
  try {
    NodeTable nodes;
    std::unordered_map<std::string, std::size_t> declared;
    for (const auto& id : doc.at("nodes")) {
      const std::string name = id.get<std::string>();
      if (!declared.emplace(name, 0).second)
        throw InputError("graph", "duplicate node identifier '" + name + "'");
      nodes.intern(name);
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
      const auto src = e.at("source").get<std::string>();
      const auto dst = e.at("target").get<std::string>();
      if (!declared.contains(src) || !declared.contains(dst))
        throw ParseError("graph", "edge references undeclared node");
      edges.push_back({nodes.intern(src), nodes.intern(dst), e.value("weight", 1.0)});
    }
    return Graph(nodes.take(), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("graph", std::string("malformed JSON graph: ") + e.what());
  }
}

Graph load_graph(std::string_view source) {
  if (source == "karate") return karate_club();
  const std::filesystem::path path(source);
  std::ifstream in(path);
  if (!in) throw InputError("graph", "cannot open '" + std::string(source) + "'");
  if (path.extension() == ".json" || looks_like_json(in)) return read_json_graph(in);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << std::setprecision(17);
  for (const Edge& e : g.edges())
    out << g.node(e.source) << ' ' << g.node(e.target) << ' ' << e.weight << '\n';
  // isolated nodes keep their place in the file
  std::vector<bool> touched(g.size(), false);
  for (const Edge& e : g.edges()) touched[e.source] = touched[e.target] = true;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!touched[i]) out << g.node(i) << '\n';
}

Partition read_partition_csv(std::istream& in, const Graph& g) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::string> label_of(g.size());
  std::vector<bool> assigned(g.size(), false);
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto comma = body.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("graph", "partition line " + std::to_string(line_no) + ": expected 'node,cell'");
    const std::string node(trim(body.substr(0, comma)));
    const std::string cell(trim(body.substr(comma + 1)));
    if (!header_seen) {
      header_seen = true;
      if (node == "node" && cell == "cell") continue;
      throw ParseError("graph", "partition CSV must start with header 'node,cell'");
    }
    const auto idx = g.index_of(node);
    if (!idx) throw ParseError("graph", "partition names unknown node '" + node + "'");
    if (assigned[*idx]) throw ParseError("graph", "node '" + node + "' assigned twice");
    assigned[*idx] = true;
    label_of[*idx] = cell;
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!assigned[i])
      throw SizeMismatchError("graph", "partition does not assign node '" + g.node(i) + "'");
  std::map<std::string, std::size_t> ids;
  std::vector<std::size_t> labels(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    labels[i] = ids.emplace(label_of[i], ids.size()).first->second;
  return Partition::from_labels(labels);
}

Partition read_partition_csv(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("graph", "cannot open '" + path.string() + "'");
  return read_partition_csv(in, g);
}

void write_partition_csv(std::ostream& out, const Graph& g, const Partition& p) {
  if (p.size() != g.size()) throw SizeMismatchError("graph", "partition does not match graph");
  out << "node,cell\n";
  for (std::size_t i = 0; i < g.size(); ++i) out << g.node(i) << ',' << p.cell(i) << '\n';
}

void write_comment_header(std::ostream& out, std::string_view text) {
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}

}  // namespace netdyn
