#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mudag/matrix.hpp"

namespace mudag {

// Undirected weighted graph on vertices 0..m-1. Edges are stored once with
// i < j, no self loops, no duplicates.
struct Graph {
  int m = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<double> weights;  // parallel to edges

  int edge_count() const { return int(edges.size()); }
};

// Named families, m >= 2. ring(2) degenerates to the single path edge.
Graph make_ring(int m);
Graph make_path(int m);
Graph make_complete(int m);
Graph make_star(int m);  // vertex 0 is the hub
Graph named_topology(const std::string& name, int m);

bool is_connected(const Graph& g);

struct ErdosRenyi {
  Graph graph;
  std::uint64_t seed_used = 0;  // seed of the accepted (connected) sample
  int attempts = 1;
};

// G(m, p): each unordered pair independently with probability p, fixed pair
// order so identical seeds give identical edge sets. Disconnected samples are
// retried with seed+1; throws after 100 attempts.
ErdosRenyi erdos_renyi_connected(int m, double p, std::uint64_t seed);

// Combinatorial weighted Laplacian L = D - A.
Matrix laplacian(const Graph& g);

// Edge-list text format: first line "m", then one "i j [weight]" line per
// edge, 0-based endpoints. Weight defaults to 1 when absent.
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list(const Graph& g, const std::string& path);
Graph load_edge_list(std::istream& in);          // throws with line numbers
Graph load_edge_list(const std::string& path);

}  // namespace mudag
