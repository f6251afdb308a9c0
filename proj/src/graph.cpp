#include "mudag/graph.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mudag/rng.hpp"

namespace mudag {

namespace {

void require_m(int m) {
  if (m < 2) throw std::runtime_error("graph: need m >= 2 vertices");
}

}  // namespace

Graph make_ring(int m) {
  require_m(m);
  if (m == 2) return make_path(2);
  Graph g;
  g.m = m;
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    g.edges.push_back({std::min(i, j), std::max(i, j)});
    g.weights.push_back(1.0);
  }
  return g;
}

Graph make_path(int m) {
  require_m(m);
  Graph g;
  g.m = m;
  for (int i = 0; i + 1 < m; ++i) {
    g.edges.push_back({i, i + 1});
    g.weights.push_back(1.0);
  }
  return g;
}

Graph make_complete(int m) {
  require_m(m);
  Graph g;
  g.m = m;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      g.edges.push_back({i, j});
      g.weights.push_back(1.0);
    }
  return g;
}

Graph make_star(int m) {
  require_m(m);
  Graph g;
  g.m = m;
  for (int j = 1; j < m; ++j) {
    g.edges.push_back({0, j});
    g.weights.push_back(1.0);
  }
  return g;
}

Graph named_topology(const std::string& name, int m) {
  if (name == "ring") return make_ring(m);
  if (name == "path") return make_path(m);
  if (name == "complete") return make_complete(m);
  if (name == "star") return make_star(m);
  throw std::runtime_error("graph: unknown topology '" + name + "'");
}

bool is_connected(const Graph& g) {
  if (g.m <= 0) return false;
  std::vector<std::vector<int>> adj(g.m);
  for (const auto& e : g.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::vector<char> seen(g.m, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.m;
}

ErdosRenyi erdos_renyi_connected(int m, double p, std::uint64_t seed) {
  require_m(m);
  if (!(p > 0.0 && p <= 1.0))
    throw std::runtime_error("graph: erdos_renyi needs p in (0, 1]");
  for (int attempt = 1; attempt <= 100; ++attempt) {
    const std::uint64_t s = seed + std::uint64_t(attempt - 1);
    Rng rng(s);
    Graph g;
    g.m = m;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (rng.uniform() < p) {
          g.edges.push_back({i, j});
          g.weights.push_back(1.0);
        }
    if (is_connected(g)) return {std::move(g), s, attempt};
  }
  std::ostringstream msg;
  msg << "graph: no connected G(" << m << ", " << p << ") sample in 100 attempts"
      << " starting from seed " << seed;
  throw std::runtime_error(msg.str());
}

Matrix laplacian(const Graph& g) {
  Matrix L(g.m, g.m);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const int i = g.edges[k][0], j = g.edges[k][1];
    const double w = g.weights[k];
    L(i, i) += w;
    L(j, j) += w;
    L(i, j) -= w;
    L(j, i) -= w;
  }
  return L;
}

void save_edge_list(const Graph& g, std::ostream& out) {
  out << g.m << "\n";
  char buf[96];
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (g.weights[k] == 1.0) {
      std::snprintf(buf, sizeof buf, "%d %d\n", g.edges[k][0], g.edges[k][1]);
    } else {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", g.edges[k][0],
                    g.edges[k][1], g.weights[k]);
    }
    out << buf;
  }
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("graph: cannot write '" + path + "'");
  save_edge_list(g, f);
}

Graph load_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("edge list: line " + std::to_string(lineno) +
                             ": " + what);
  };
  Graph g;
  if (!std::getline(in, line)) {
    lineno = 1;
    fail("missing vertex count");
  }
  ++lineno;
  {
    std::istringstream ss(line);
    if (!(ss >> g.m) || g.m < 2) fail("bad vertex count");
    std::string rest;
    if (ss >> rest) fail("trailing tokens after vertex count");
  }
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int i, j;
    if (!(ss >> i >> j)) fail("expected 'i j [weight]'");
    double w = 1.0;
    std::string tok;
    if (ss >> tok) {
      std::size_t pos = 0;
      bool ok = true;
      try {
        w = std::stod(tok, &pos);
      } catch (...) {
        ok = false;
      }
      if (!ok || pos != tok.size()) fail("bad weight");
      std::string rest;
      if (ss >> rest) fail("trailing tokens");
    }
    if (i == j) fail("self loop");
    if (i < 0 || j < 0 || i >= g.m || j >= g.m) fail("vertex out of range");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) fail("duplicate edge");
    if (!(w > 0.0)) fail("nonpositive weight");
    g.edges.push_back({i, j});
    g.weights.push_back(w);
  }
  return g;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("graph: cannot read '" + path + "'");
  return load_edge_list(f);
}

}  // namespace mudag
