#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace elab {

// Undirected coupling graph. Vertices are dense integers 0..n-1; each edge is
// stored once in canonical orientation (lower id first). Antisymmetric
// per-edge quantities (drift, noise increments) are handled by sign
// conventions at the use sites, so one stored edge is enough.
struct InteractionGraph {
  std::size_t n_vertices = 0;
  std::vector<std::array<int, 2>> edges;          // canonical: edge[0] < edge[1]
  std::vector<std::vector<int>> adjacency;        // neighbor vertex ids
  // For each vertex, the indices into `edges` of its incident edges, and the
  // sign (+1 if the vertex is the lower endpoint, -1 otherwise).
  std::vector<std::vector<std::pair<int, int>>> incident;
  // Lattice coordinates, kept as metadata when built from a box. Empty
  // otherwise.
  std::vector<std::vector<long>> coords;

  std::size_t n_edges() const { return edges.size(); }
};

struct GraphValidationReport {
  bool valid = true;
  std::vector<std::string> problems;  // loops, asymmetries, duplicates, disconnected
};

// Per-axis inclusive index range.
struct AxisRange {
  long lo = 0;
  long hi = 0;
};

// All lattice points of the box, edges between points at lattice distance 1.
// Throws std::invalid_argument on an empty box or empty range.
InteractionGraph build_lattice_region(int lattice_dim, const std::vector<AxisRange>& box);

// All n(n-1)/2 undirected edges. Throws for n < 2.
InteractionGraph build_complete_graph(int n);

// Build from an explicit edge list over vertices 0..n-1. Throws on loops,
// out-of-range endpoints or duplicate undirected edges.
InteractionGraph build_from_edges(std::size_t n, std::vector<std::array<int, 2>> edge_list);

GraphValidationReport validate(const InteractionGraph& g);

bool is_connected(const InteractionGraph& g);

}  // namespace elab
