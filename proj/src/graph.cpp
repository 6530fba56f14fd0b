#include "energylab/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace elab {

namespace {

void finalize(InteractionGraph& g) {
  std::sort(g.edges.begin(), g.edges.end());
  g.adjacency.assign(g.n_vertices, {});
  g.incident.assign(g.n_vertices, {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int a = g.edges[e][0], b = g.edges[e][1];
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
    g.incident[a].push_back({static_cast<int>(e), +1});
    g.incident[b].push_back({static_cast<int>(e), -1});
  }
}

}  // namespace

InteractionGraph build_lattice_region(int lattice_dim, const std::vector<AxisRange>& box) {
  if (lattice_dim <= 0) throw std::invalid_argument("lattice_dim must be positive");
  if (box.empty()) throw std::invalid_argument("empty box");
  if (static_cast<int>(box.size()) != lattice_dim)
    throw std::invalid_argument("box must have one range per lattice axis");
  for (const auto& r : box)
    if (r.hi < r.lo) throw std::invalid_argument("empty axis range");

  // Enumerate points in lexicographic order; that order is the vertex id.
  std::vector<std::vector<long>> pts;
  std::vector<long> cur(lattice_dim);
  for (int i = 0; i < lattice_dim; ++i) cur[i] = box[i].lo;
  for (;;) {
    pts.push_back(cur);
    int axis = lattice_dim - 1;
    while (axis >= 0) {
      if (++cur[axis] <= box[axis].hi) break;
      cur[axis] = box[axis].lo;
      --axis;
    }
    if (axis < 0) break;
  }

  std::map<std::vector<long>, int> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<int>(i);

  InteractionGraph g;
  g.n_vertices = pts.size();
  g.coords = pts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int ax = 0; ax < lattice_dim; ++ax) {
      std::vector<long> nb = pts[i];
      nb[ax] += 1;
      auto it = index.find(nb);
      if (it != index.end()) g.edges.push_back({static_cast<int>(i), it->second});
    }
  }
  for (auto& e : g.edges)
    if (e[0] > e[1]) std::swap(e[0], e[1]);
  finalize(g);
  return g;
}

InteractionGraph build_complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  InteractionGraph g;
  g.n_vertices = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  finalize(g);
  return g;
}

InteractionGraph build_from_edges(std::size_t n, std::vector<std::array<int, 2>> edge_list) {
  InteractionGraph g;
  g.n_vertices = n;
  std::set<std::array<int, 2>> seen;
  for (auto e : edge_list) {
    if (e[0] == e[1]) throw std::invalid_argument("loop edge");
    if (e[0] < 0 || e[1] < 0 || e[0] >= static_cast<int>(n) || e[1] >= static_cast<int>(n))
      throw std::invalid_argument("edge endpoint out of range");
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    if (!seen.insert(e).second) throw std::invalid_argument("duplicate undirected edge");
    g.edges.push_back(e);
  }
  finalize(g);
  return g;
}

bool is_connected(const InteractionGraph& g) {
  if (g.n_vertices == 0) return false;
  std::vector<char> seen(g.n_vertices, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == g.n_vertices;
}

GraphValidationReport validate(const InteractionGraph& g) {
  GraphValidationReport rep;
  std::set<std::array<int, 2>> seen;
  for (auto e : g.edges) {
    if (e[0] == e[1]) {
      rep.problems.push_back("loop at vertex " + std::to_string(e[0]));
      continue;
    }
    std::array<int, 2> c = e;
    if (c[0] > c[1]) std::swap(c[0], c[1]);
    if (!seen.insert(c).second)
      rep.problems.push_back("duplicate edge (" + std::to_string(c[0]) + "," +
                             std::to_string(c[1]) + ")");
  }
  // Neighbor lists must be mutually consistent with the edge list.
  for (std::size_t v = 0; v < g.adjacency.size(); ++v) {
    for (int w : g.adjacency[v]) {
      std::array<int, 2> c = {static_cast<int>(v), w};
      if (c[0] > c[1]) std::swap(c[0], c[1]);
      if (!seen.count(c))
        rep.problems.push_back("adjacency entry without edge (" + std::to_string(v) + "," +
                               std::to_string(w) + ")");
    }
  }
  std::vector<std::size_t> degree(g.n_vertices, 0);
  for (auto e : g.edges) {
    if (e[0] >= 0 && static_cast<std::size_t>(e[0]) < g.n_vertices) ++degree[e[0]];
    if (e[1] >= 0 && static_cast<std::size_t>(e[1]) < g.n_vertices) ++degree[e[1]];
  }
  for (std::size_t v = 0; v < g.n_vertices; ++v) {
    if (g.adjacency.size() == g.n_vertices && g.adjacency[v].size() != degree[v])
      rep.problems.push_back("degree mismatch at vertex " + std::to_string(v));
  }
  if (g.n_vertices > 1 && !is_connected(g)) rep.problems.push_back("graph is disconnected");
  rep.valid = rep.problems.empty();
  return rep;
}

}  // namespace elab
