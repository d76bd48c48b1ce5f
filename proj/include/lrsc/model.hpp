#pragma once

// Planted-cluster random graph model.  A graph on n nodes carries t
// disjoint planted clusters C_1..C_t; the adjacency matrix is symmetric
// 0/1 with unit diagonal.  Each within-cluster pair is an edge with
// probability p_l, every other pair with probability q, all pairs
// independent.  R denotes the union of the diagonal blocks C_l x C_l;
// recovery targets the indicator matrix of R.
//
// The complement reduction handles dense backgrounds: flipping every
// off-diagonal entry maps parameters (p, q) to (1-p, 1-q), so a model
// with p_min < q can be solved on the complement graph.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrsc/rng.hpp"
#include "lrsc/sym_matrix.hpp"

namespace lrsc {

enum class Method { blind, intelligent };

const char* method_name(Method m);
Method method_from_name(const std::string& s);  // throws std::invalid_argument

struct ClusterLayout {
  int n = 0;
  std::vector<std::vector<int>> clusters;  // disjoint, ascending node indices

  int t() const { return static_cast<int>(clusters.size()); }
  std::vector<int> sizes() const;
  long long region_size() const;  // |R| = sum of k_l^2
  // Per-node cluster index, -1 for background nodes.
  std::vector<int> labels() const;
  // Clusters sorted internally and by smallest member; use for comparisons.
  ClusterLayout canonical() const;
  void validate() const;  // throws std::invalid_argument

  friend bool operator==(const ClusterLayout& a, const ClusterLayout& b) {
    return a.n == b.n && a.clusters == b.clusters;
  }
};

struct ModelParams {
  std::vector<double> p;  // per-cluster edge probability
  double q = 0.0;         // background edge probability
  double r = 1.0;         // observation rate applied (p, q already rescaled)

  double p_min() const;
};

struct PlantedGraph {
  SymMatrix a;
  ClusterLayout layout;
  ModelParams params;
  std::uint64_t seed = 0;  // seed that produced the graph, when the caller knows it

  int n() const { return a.order(); }
};

// Random support over [rows] x [cols]: each coordinate kept independently
// with probability rate.
CoordSet sample_support(int rows, int cols, double rate, SplitMix64& rng);

// Square variant with the diagonal always included.
CoordSet sample_corrected_support(int dim, double rate, SplitMix64& rng);

// Sample a graph.  Lower-triangular off-diagonal entries are drawn
// independently, the matrix is symmetrized, and the diagonal is set to 1.
// Requires a valid layout, p sized to the cluster count, probabilities in
// [0,1], p_min > q (use the complement reduction otherwise), and r == 1.
PlantedGraph generate(const ClusterLayout& layout, const ModelParams& params, SplitMix64& rng);

// Flip every off-diagonal entry; diagonal stays 1.  Parameters map to
// (1-p_l, 1-q).
PlantedGraph complement(const PlantedGraph& g);

// Keep each off-diagonal edge independently with probability r in (0,1];
// the diagonal stays 1.  Parameters rescale to (r*p_l, r*q) and the rate
// is recorded.
PlantedGraph observe_partial(const PlantedGraph& g, double r, SplitMix64& rng);

// Coordinates of R (union of within-cluster blocks, diagonal included).
CoordSet region_R(const ClusterLayout& layout);

// Support of the adjacency matrix (entries equal to 1; includes diagonal).
CoordSet adjacency_support(const SymMatrix& a);

// Indicator matrix of R: the low-rank matrix the programs aim to recover.
SymMatrix planted_low_rank(const ClusterLayout& layout);

// The sparse component paired with planted_low_rank at the planted
// solution: blind  S = 1 on (A intersect R^c) minus 1 on (A^c intersect R);
// intelligent  S = 1 on (A^c intersect R).
SymMatrix planted_sparse(const PlantedGraph& g, Method method);

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge-list text format (structure only; parameters are not persisted):
//   line 1:  "n t"
//   then one line "i j" per undirected edge with i < j (0-based; the unit
//   diagonal is implicit)
//   then t lines "cluster <id>: <members...>" with ids 1..t and ascending
//   0-based member indices.
void write_edge_list(const PlantedGraph& g, std::ostream& out);

struct LoadedGraph {
  SymMatrix a;
  ClusterLayout layout;
};

// Throws io_error with "<name>:<line>: ..." diagnostics on malformed input.
LoadedGraph read_edge_list(std::istream& in, const std::string& name);

}  // namespace lrsc
