#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcap/errors.hpp"
#include "rcap/rational.hpp"

namespace rcap {

// Brute-force subtree enumeration iterates over all edge subsets; instances
// beyond this are out of the tool's desk-scale range.
inline constexpr int kMaxEnumerationEdges = 20;

struct Edge {
  int id = 0;  // 1..|E|
  int tail = 0;
  int head = 0;
  Rational capacity;
};

struct Network {
  bool directed = false;
  int vertex_count = 0;
  std::vector<Edge> edges;

  const Edge& edge(int id) const { return edges.at(size_t(id) - 1); }
  int edge_count() const { return int(edges.size()); }
};

struct Session {
  std::string id;
  int source = 0;
  std::vector<int> destinations;  // sorted, nonempty, excludes source

  std::vector<int> terminals() const {
    std::vector<int> t = destinations;
    t.push_back(source);
    std::sort(t.begin(), t.end());
    return t;
  }
};

// Minimal spanning subtree for one session: connected, acyclic, covers all
// terminals, every leaf is a terminal. Edge ids are kept sorted.
struct Subtree {
  std::string session_id;
  std::vector<int> edge_ids;
  uint64_t mask = 0;  // bit e-1 set iff edge e belongs to the subtree

  friend bool operator==(const Subtree&, const Subtree&) = default;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

inline bool is_minimal_subtree(const Network& net, const Session& s,
                               uint64_t mask) {
  const int n = net.vertex_count;
  std::vector<int> degree(n + 1, 0), indegree(n + 1, 0), outdegree(n + 1, 0);
  std::vector<char> in_tree(n + 1, 0);
  detail::UnionFind uf(n + 1);
  int edge_count = 0;
  for (int e = 1; e <= net.edge_count(); ++e) {
    if (!(mask >> (e - 1) & 1)) continue;
    const Edge& ed = net.edge(e);
    ++edge_count;
    in_tree[ed.tail] = in_tree[ed.head] = 1;
    ++degree[ed.tail];
    ++degree[ed.head];
    ++outdegree[ed.tail];
    ++indegree[ed.head];
    if (!uf.unite(ed.tail, ed.head)) return false;  // cycle
  }
  if (edge_count == 0) return false;
  int vertex_count = 0;
  for (int v = 1; v <= n; ++v) vertex_count += in_tree[v];
  if (edge_count != vertex_count - 1) return false;
  // terminal coverage + single component
  std::vector<int> terms = s.terminals();
  for (int t : terms)
    if (!in_tree[t]) return false;
  int root = uf.find(terms.front());
  for (int v = 1; v <= n; ++v)
    if (in_tree[v] && uf.find(v) != root) return false;
  std::set<int> terminal_set(terms.begin(), terms.end());
  if (!net.directed) {
    for (int v = 1; v <= n; ++v)
      if (in_tree[v] && degree[v] == 1 && !terminal_set.count(v)) return false;
    return true;
  }
  // Directed: arborescence rooted at the source, leaves are destinations.
  if (!in_tree[s.source] || indegree[s.source] != 0) return false;
  for (int v = 1; v <= n; ++v) {
    if (!in_tree[v]) continue;
    if (v != s.source && indegree[v] != 1) return false;
    if (outdegree[v] == 0 && !terminal_set.count(v)) return false;
  }
  return true;
}

// The complete list of minimal subtrees for a session, sorted by edge set.
inline std::vector<Subtree> enumerate_subtrees(const Network& net,
                                               const Session& s) {
  const int m = net.edge_count();
  if (m > kMaxEnumerationEdges)
    throw resource_error("subtree enumeration limited to " +
                         std::to_string(kMaxEnumerationEdges) + " edges");
  std::vector<Subtree> out;
  for (uint64_t mask = 1; mask < (uint64_t(1) << m); ++mask) {
    if (!is_minimal_subtree(net, s, mask)) continue;
    Subtree t;
    t.session_id = s.id;
    t.mask = mask;
    for (int e = 1; e <= m; ++e)
      if (mask >> (e - 1) & 1) t.edge_ids.push_back(e);
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const Subtree& a, const Subtree& b) { return a.edge_ids < b.edge_ids; });
  if (out.empty())
    throw internal_error("session '" + s.id + "' has no spanning subtree");
  return out;
}

// Per-session subtree lists, enumerated once and shared.
struct SubtreeTable {
  std::vector<std::vector<Subtree>> per_session;

  static SubtreeTable build(const Network& net,
                            const std::vector<Session>& sessions) {
    SubtreeTable table;
    table.per_session.reserve(sessions.size());
    for (const Session& s : sessions)
      table.per_session.push_back(enumerate_subtrees(net, s));
    return table;
  }
};

struct Instance {
  Network net;
  std::vector<Session> sessions;
  SubtreeTable trees;

  static Instance build(Network net, std::vector<Session> sessions) {
    SubtreeTable t = SubtreeTable::build(net, sessions);
    return Instance{std::move(net), std::move(sessions), std::move(t)};
  }
};

inline bool reachable(const Network& net, int from, int to) {
  std::vector<char> seen(net.vertex_count + 1, 0);
  std::queue<int> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Edge& e : net.edges) {
      if (e.tail == v && !seen[e.head]) seen[e.head] = 1, q.push(e.head);
      if (!net.directed && e.head == v && !seen[e.tail]) seen[e.tail] = 1, q.push(e.tail);
    }
  }
  return seen[to];
}

inline void validate_network(const Network& net,
                             const std::vector<Session>& sessions) {
  if (net.vertex_count < 1) throw input_error("vertex count must be positive");
  if (net.edges.empty()) throw input_error("network has no edges");
  for (size_t i = 0; i < net.edges.size(); ++i) {
    const Edge& e = net.edges[i];
    if (e.id != int(i) + 1)
      throw input_error("edge ids must be 1..|E| in order");
    if (e.tail < 1 || e.tail > net.vertex_count || e.head < 1 ||
        e.head > net.vertex_count)
      throw input_error("edge " + std::to_string(e.id) + " has invalid endpoint");
    if (e.tail == e.head)
      throw input_error("edge " + std::to_string(e.id) + " is a self-loop");
    if (e.capacity < 0)
      throw input_error("edge " + std::to_string(e.id) + " has negative capacity");
  }
  std::set<std::string> ids;
  for (const Session& s : sessions) {
    if (s.id.empty()) throw input_error("session with empty id");
    if (!ids.insert(s.id).second)
      throw input_error("duplicate session id '" + s.id + "'");
    if (s.source < 1 || s.source > net.vertex_count)
      throw input_error("session '" + s.id + "' has invalid source");
    if (s.destinations.empty())
      throw input_error("session '" + s.id + "' has no destinations");
    std::set<int> seen;
    for (int d : s.destinations) {
      if (d < 1 || d > net.vertex_count)
        throw input_error("session '" + s.id + "' has invalid destination");
      if (d == s.source)
        throw input_error("session '" + s.id + "' lists its source as destination");
      if (!seen.insert(d).second)
        throw input_error("session '" + s.id + "' repeats a destination");
      if (!reachable(net, s.source, d))
        throw input_error("session '" + s.id + "' has unreachable destination " +
                          std::to_string(d));
    }
  }
}

inline std::pair<Network, std::vector<Session>> load_network(
    const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("network parse error: ") + e.what());
  }
  Network net;
  std::vector<Session> sessions;
  try {
    net.directed = doc.at("directed").get<bool>();
    net.vertex_count = doc.at("vertices").get<int>();
    for (const auto& je : doc.at("edges")) {
      Edge e;
      e.id = je.at("id").get<int>();
      e.tail = je.at("tail").get<int>();
      e.head = je.at("head").get<int>();
      e.capacity = parse_rational(je.at("capacity").get<std::string>());
      net.edges.push_back(e);
    }
    for (const auto& js : doc.at("sessions")) {
      Session s;
      s.id = js.at("id").get<std::string>();
      s.source = js.at("source").get<int>();
      for (const auto& d : js.at("destinations")) s.destinations.push_back(d.get<int>());
      std::sort(s.destinations.begin(), s.destinations.end());
      sessions.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("network parse error: ") + e.what());
  }
  validate_network(net, sessions);
  return {std::move(net), std::move(sessions)};
}

inline bool is_ring(const Network& net) {
  if (net.directed) return false;
  if (net.edge_count() != net.vertex_count || net.vertex_count < 3) return false;
  std::vector<int> degree(net.vertex_count + 1, 0);
  for (const Edge& e : net.edges) {
    ++degree[e.tail];
    ++degree[e.head];
  }
  for (int v = 1; v <= net.vertex_count; ++v)
    if (degree[v] != 2) return false;
  return reachable(net, 1, net.vertex_count);  // connected => single cycle
}

// All contiguous arcs of the ring with 1..|E|-1 edges, in cyclic edge order.
// These are exactly the possible "gaps" whose complements are the minimal
// subtrees of ring sessions.
inline std::vector<Subtree> enumerate_arc_intervals(const Network& net) {
  if (!is_ring(net)) throw input_error("network is not an undirected ring");
  const int m = net.edge_count();
  // cyclic order of edges by walking the ring from vertex 1
  std::vector<int> order;
  std::vector<char> used(m + 1, 0);
  int v = 1;
  for (int step = 0; step < m; ++step) {
    for (const Edge& e : net.edges) {
      if (used[e.id]) continue;
      if (e.tail == v || e.head == v) {
        used[e.id] = 1;
        order.push_back(e.id);
        v = e.tail == v ? e.head : e.tail;
        break;
      }
    }
  }
  std::vector<Subtree> arcs;
  for (int start = 0; start < m; ++start) {
    for (int len = 1; len < m; ++len) {
      Subtree a;
      a.session_id = "arc";
      for (int k = 0; k < len; ++k) {
        int e = order[size_t((start + k) % m)];
        a.edge_ids.push_back(e);
        a.mask |= uint64_t(1) << (e - 1);
      }
      std::sort(a.edge_ids.begin(), a.edge_ids.end());
      arcs.push_back(std::move(a));
    }
  }
  return arcs;
}

}  // namespace rcap
