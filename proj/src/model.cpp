#include "lrsc/model.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace lrsc {

const char* method_name(Method m) {
  return m == Method::blind ? "blind" : "intelligent";
}

Method method_from_name(const std::string& s) {
  if (s == "blind") return Method::blind;
  if (s == "intelligent") return Method::intelligent;
  throw std::invalid_argument("unknown method '" + s + "' (expected blind or intelligent)");
}

std::vector<int> ClusterLayout::sizes() const {
  std::vector<int> k;
  k.reserve(clusters.size());
  for (const auto& c : clusters) k.push_back(static_cast<int>(c.size()));
  return k;
}

long long ClusterLayout::region_size() const {
  long long s = 0;
  for (const auto& c : clusters) {
    long long k = static_cast<long long>(c.size());
    s += k * k;
  }
  return s;
}

std::vector<int> ClusterLayout::labels() const {
  std::vector<int> lab(n, -1);
  for (int l = 0; l < t(); ++l)
    for (int node : clusters[l]) lab[node] = l;
  return lab;
}

ClusterLayout ClusterLayout::canonical() const {
  ClusterLayout c = *this;
  for (auto& cl : c.clusters) std::sort(cl.begin(), cl.end());
  std::sort(c.clusters.begin(), c.clusters.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  return c;
}

void ClusterLayout::validate() const {
  if (n < 0) throw std::invalid_argument("layout: negative n");
  std::vector<char> seen(n, 0);
  for (const auto& c : clusters) {
    if (c.empty()) throw std::invalid_argument("layout: empty cluster");
    int prev = -1;
    for (int node : c) {
      if (node < 0 || node >= n)
        throw std::invalid_argument("layout: node index out of range");
      if (node <= prev)
        throw std::invalid_argument("layout: cluster members must be strictly ascending");
      if (seen[node]) throw std::invalid_argument("layout: clusters overlap");
      seen[node] = 1;
      prev = node;
    }
  }
}

double ModelParams::p_min() const {
  double m = 1.0;
  for (double v : p) m = std::min(m, v);
  return m;
}

CoordSet sample_support(int rows, int cols, double rate, SplitMix64& rng) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("sample_support: rate outside [0,1]");
  CoordSet s(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rng.bernoulli(rate)) s.set(i, j);
  return s;
}

CoordSet sample_corrected_support(int dim, double rate, SplitMix64& rng) {
  CoordSet s = sample_support(dim, dim, rate, rng);
  for (int i = 0; i < dim; ++i) s.set(i, i);
  return s;
}

PlantedGraph generate(const ClusterLayout& layout, const ModelParams& params, SplitMix64& rng) {
  layout.validate();
  if (static_cast<int>(params.p.size()) != layout.t())
    throw std::invalid_argument("generate: p must have one entry per cluster");
  for (double v : params.p)
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("generate: p outside [0,1]");
  if (params.q < 0.0 || params.q > 1.0) throw std::invalid_argument("generate: q outside [0,1]");
  if (layout.t() > 0 && params.p_min() <= params.q)
    throw std::invalid_argument(
        "generate: requires p_min > q; apply the complement reduction for dense backgrounds");
  if (params.r != 1.0)
    throw std::invalid_argument("generate: r must be 1 (use observe_partial afterwards)");

  PlantedGraph g;
  g.a = SymMatrix(layout.n);
  g.layout = layout;
  g.params = params;

  std::vector<int> lab = layout.labels();
  for (int i = 0; i < layout.n; ++i) {
    for (int j = 0; j < i; ++j) {
      double prob = (lab[i] >= 0 && lab[i] == lab[j]) ? params.p[lab[i]] : params.q;
      double v = rng.bernoulli(prob) ? 1.0 : 0.0;
      g.a(i, j) = v;
      g.a(j, i) = v;
    }
    g.a(i, i) = 1.0;
  }
  return g;
}

PlantedGraph complement(const PlantedGraph& g) {
  PlantedGraph c = g;
  int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c.a(i, j) = (i == j) ? 1.0 : 1.0 - g.a(i, j);
  for (double& v : c.params.p) v = 1.0 - v;
  c.params.q = 1.0 - g.params.q;
  return c;
}

PlantedGraph observe_partial(const PlantedGraph& g, double r, SplitMix64& rng) {
  if (r <= 0.0 || r > 1.0) throw std::invalid_argument("observe_partial: r outside (0,1]");
  PlantedGraph o = g;
  int n = g.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (g.a(i, j) != 0.0) {
        double v = rng.bernoulli(r) ? 1.0 : 0.0;
        o.a(i, j) = v;
        o.a(j, i) = v;
      }
    }
    o.a(i, i) = 1.0;
  }
  for (double& v : o.params.p) v *= r;
  o.params.q *= r;
  o.params.r = r;
  return o;
}

CoordSet region_R(const ClusterLayout& layout) {
  CoordSet s(layout.n, layout.n);
  for (const auto& c : layout.clusters)
    for (int i : c)
      for (int j : c) s.set(i, j);
  return s;
}

CoordSet adjacency_support(const SymMatrix& a) {
  int n = a.order();
  CoordSet s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) s.set(i, j);
  return s;
}

SymMatrix planted_low_rank(const ClusterLayout& layout) {
  SymMatrix l(layout.n);
  for (const auto& c : layout.clusters)
    for (int i : c)
      for (int j : c) l(i, j) = 1.0;
  return l;
}

SymMatrix planted_sparse(const PlantedGraph& g, Method method) {
  int n = g.n();
  SymMatrix s(n);
  CoordSet r = region_R(g.layout);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool edge = g.a(i, j) != 0.0;
      bool in_r = r.contains(i, j);
      if (method == Method::blind) {
        if (edge && !in_r) s(i, j) = 1.0;
        else if (!edge && in_r) s(i, j) = -1.0;
      } else {
        if (!edge && in_r) s(i, j) = 1.0;
      }
    }
  }
  return s;
}

void write_edge_list(const PlantedGraph& g, std::ostream& out) {
  int n = g.n();
  out << n << ' ' << g.layout.t() << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.a(i, j) != 0.0) out << i << ' ' << j << '\n';
  for (int l = 0; l < g.layout.t(); ++l) {
    out << "cluster " << (l + 1) << ':';
    for (int node : g.layout.clusters[l]) out << ' ' << node;
    out << '\n';
  }
}

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  throw io_error(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

LoadedGraph read_edge_list(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;

  auto next_line = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    if (required) fail(name, lineno + 1, "unexpected end of file");
    return false;
  };

  next_line(true);
  std::istringstream head(line);
  int n = -1, t = -1;
  if (!(head >> n >> t) || n < 0 || t < 0) fail(name, lineno, "expected header 'n t'");

  LoadedGraph g;
  g.a = SymMatrix::identity(n);
  g.layout.n = n;
  g.layout.clusters.resize(t);
  std::vector<char> have_cluster(t, 0);
  int clusters_seen = 0;

  while (next_line(false)) {
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "cluster") {
      std::string id_tok;
      if (!(ls >> id_tok) || id_tok.empty() || id_tok.back() != ':')
        fail(name, lineno, "expected 'cluster <id>:'");
      int id = 0;
      try {
        id = std::stoi(id_tok.substr(0, id_tok.size() - 1));
      } catch (const std::exception&) {
        fail(name, lineno, "bad cluster id '" + id_tok + "'");
      }
      if (id < 1 || id > t) fail(name, lineno, "cluster id out of range");
      if (have_cluster[id - 1]) fail(name, lineno, "duplicate cluster id");
      have_cluster[id - 1] = 1;
      ++clusters_seen;
      int node;
      while (ls >> node) {
        if (node < 0 || node >= n) fail(name, lineno, "cluster member out of range");
        g.layout.clusters[id - 1].push_back(node);
      }
      if (!ls.eof()) fail(name, lineno, "bad cluster member list");
      if (g.layout.clusters[id - 1].empty()) fail(name, lineno, "empty cluster");
    } else {
      if (clusters_seen > 0) fail(name, lineno, "edge line after cluster lines");
      std::istringstream es(line);
      int i = -1, j = -1;
      if (!(es >> i >> j)) fail(name, lineno, "expected edge 'i j'");
      std::string extra;
      if (es >> extra) fail(name, lineno, "trailing tokens on edge line");
      if (i < 0 || j < 0 || i >= n || j >= n) fail(name, lineno, "edge index out of range");
      if (i >= j) fail(name, lineno, "edges must satisfy i < j");
      if (g.a(i, j) != 0.0) fail(name, lineno, "duplicate edge");
      g.a(i, j) = 1.0;
      g.a(j, i) = 1.0;
    }
  }

  if (clusters_seen != t)
    fail(name, lineno, "expected " + std::to_string(t) + " cluster lines, found " +
                           std::to_string(clusters_seen));
  try {
    g.layout.validate();
  } catch (const std::invalid_argument& e) {
    fail(name, lineno, e.what());
  }
  return g;
}

}  // namespace lrsc
