#pragma once

#include "conecg/cg.hpp"
#include "conecg/polyopt.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace conecg {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph. Nodes are 0-based in memory; the DIMACS text
/// format is 1-based.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph() = default;
  /// Edges in any order and orientation; self-loops, duplicates and
  /// out-of-range endpoints throw GraphError.
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }  // i < j, sorted
  bool has_edge(int i, int j) const;
  int degree(int i) const;
  int min_degree() const;
  Eigen::MatrixXd adjacency() const;
  Graph complement() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<char> adj_;  // n×n
};

/// "p edge n m" header, "e i j" lines (1-based), "c" comment lines.
Graph read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const Graph& g);

Graph empty_graph(int n);
Graph complete_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
/// Outer 5-cycle 0..4, spokes i–i+5, inner pentagram 5..9.
Graph petersen();
Graph petersen_complement();

/// Exact α(G) by exhaustive search; n ≤ 30.
int stability_number(const Graph& g);

/// max Σxᵢ  s.t.  xᵢ + xⱼ ≤ 1 on edges, 0 ≤ x ≤ 1.
double lp2_bound(const Graph& g, const conic::Params& params = {});

/// λ₀ = n − min degree + 1 with λ₀(I+A) − J = D + N, D dd, N ≥ 0.
struct InitLambda {
  double lambda = 0;
  SymMatrixd d;
  SymMatrixd nonneg;
};
InitLambda init_lambda(const Graph& g);

/// min λ  s.t.  λ(I+A) − J − N = M,  N ≥ 0 entrywise,  M in the atom cone.
/// Rows (p,q), p ≤ q, in upper_index order; aux columns are λ then N_pq.
MatrixProgram stableset_program(const Graph& g);

struct StableBound {
  double lambda = 0;
  conic::Status status = conic::Status::NumericalFailure;
  MasterResult master;
};
StableBound dsos1_bound(const Graph& g, const conic::Params& params = {});
StableBound sdsos1_bound(const Graph& g, const conic::Params& params = {});

struct StableCgConfig {
  CgConfig cg;
  Pricing pricing = Pricing::Eig;
  std::size_t t1 = 300000;
  std::size_t t2 = 500;
};
CgTrace cg_stableset(const Graph& g, const StableCgConfig& cfg);

/// zᵀ(λ(I+A) − J)z with z = (x₁², …, x_n²).
Poly stable_set_form(const Graph& g, double lambda);

struct RStableResult {
  double lambda = 0;      // bisection upper end: smallest λ found feasible
  double direct = 0;      // the same quantity from a single LP
  int steps = 0;
};
/// Smallest λ (to `tol`) with stable_set_form(g, λ)·(Σxᵢ²)^r dsos (LP) or
/// sdsos (SOCP), by bisection; also solved directly as one LP/SOCP.
RStableResult r_stable_bound(const Graph& g, int r, CgMode mode, double tol = 1e-3, const BoundOptions& opts = {});

/// "graph,n,m,mode,pricing,final_bound,iters,converged".
std::string summary_header();
std::string summary_line(const std::string& name, const Graph& g, CgMode mode, Pricing pricing, const CgTrace& t);

}  // namespace conecg
