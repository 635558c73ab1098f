#include "conecg/stableset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace conecg {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw GraphError("graph: negative node count");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  for (auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw GraphError("graph: edge endpoint out of range");
    if (i == j) throw GraphError("graph: self-loop on node " + std::to_string(i));
    if (i > j) std::swap(i, j);
    if (adj_[i * n + j]) throw GraphError("graph: duplicate edge");
    adj_[i * n + j] = adj_[j * n + i] = 1;
  }
  std::sort(edges.begin(), edges.end());
  edges_ = std::move(edges);
}

bool Graph::has_edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * n_ + j] != 0; }

int Graph::degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j) d += adj_[static_cast<std::size_t>(i) * n_ + j];
  return d;
}

int Graph::min_degree() const {
  int d = n_;
  for (int i = 0; i < n_; ++i) d = std::min(d, degree(i));
  return n_ == 0 ? 0 : d;
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& [i, j] : edges_) a(i, j) = a(j, i) = 1;
  return a;
}

Graph Graph::complement() const {
  std::vector<Edge> e;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!has_edge(i, j)) e.emplace_back(i, j);
  return Graph(n_, std::move(e));
}

Graph read_dimacs(std::istream& in) {
  std::string line;
  int n = -1, m = -1, lineno = 0;
  std::vector<Graph::Edge> edges;
  auto fail = [&](const std::string& msg) {
    return GraphError("read_dimacs: line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (n >= 0) throw fail("second header");
      if (!(ls >> kind >> n >> m) || (kind != "edge" && kind != "col") || n < 0 || m < 0)
        throw fail("expected \"p edge n m\"");
    } else if (tag == "e") {
      if (n < 0) throw fail("edge before header");
      long long i = 0, j = 0;
      if (!(ls >> i >> j)) throw fail("expected \"e i j\"");
      if (i < 1 || j < 1 || i > n || j > n) throw fail("node index out of range");
      edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    } else {
      throw fail("unknown line type '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing data");
  }
  if (n < 0) throw GraphError("read_dimacs: missing header");
  if (static_cast<int>(edges.size()) != m)
    throw GraphError("read_dimacs: header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  return Graph(n, std::move(edges));
}

void write_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.n() << ' ' << g.m() << '\n';
  for (const auto& [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

Graph empty_graph(int n) { return Graph(n, {}); }

Graph complete_graph(int n) { return empty_graph(n).complement(); }

Graph path_graph(int n) {
  std::vector<Graph::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph cycle_graph(int n) {
  if (n < 3) throw GraphError("cycle_graph: need n ≥ 3");
  std::vector<Graph::Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph petersen() {
  std::vector<Graph::Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, std::move(e));
}

Graph petersen_complement() { return petersen().complement(); }

int stability_number(const Graph& g) {
  const int n = g.n();
  if (n > 30) throw GraphError("stability_number: brute force limited to 30 nodes");
  std::vector<std::uint32_t> closed(n);
  for (int i = 0; i < n; ++i) {
    closed[i] = 1u << i;
    for (int j = 0; j < n; ++j)
      if (g.has_edge(i, j)) closed[i] |= 1u << j;
  }
  int best = 0;
  std::function<void(std::uint32_t, int)> search = [&](std::uint32_t cand, int size) {
    if (cand == 0) {
      best = std::max(best, size);
      return;
    }
    if (size + std::popcount(cand) <= best) return;
    const int v = std::countr_zero(cand);
    search(cand & ~closed[v], size + 1);
    search(cand & ~(1u << v), size);
  };
  search(n == 32 ? ~0u : (1u << n) - 1u, 0);
  return best;
}

double lp2_bound(const Graph& g, const conic::Params& params) {
  conic::Model m;
  m.set_sense(conic::Sense::Maximize);
  std::vector<int> x(g.n());
  for (int i = 0; i < g.n(); ++i) {
    x[i] = m.add_variable(0.0, 1.0, "x" + std::to_string(i));
    m.add_inequality({{x[i], -1.0}}, -1.0);
  }
  for (const auto& [i, j] : g.edges()) m.add_inequality({{x[i], -1.0}, {x[j], -1.0}}, -1.0);
  const conic::Solution s = conic::solve(m, params);
  if (s.status != conic::Status::Optimal)
    throw conic::ConicError("lp2_bound: solver returned " + conic::to_string(s.status));
  return s.objective;
}

InitLambda init_lambda(const Graph& g) {
  const int n = g.n();
  InitLambda r;
  r.lambda = n - g.min_degree() + 1;
  r.d = SymMatrixd(n);
  r.nonneg = SymMatrixd(n);
  for (int i = 0; i < n; ++i) {
    r.d.set(i, i, r.lambda - 1);
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j))
        r.nonneg.set(i, j, r.lambda - 1);
      else
        r.d.set(i, j, -1.0);
    }
  }
  return r;
}

MatrixProgram stableset_program(const Graph& g) {
  const int n = g.n();
  MatrixProgram prog;
  prog.n = n;
  prog.sense = conic::Sense::Minimize;
  const int rows = n * (n + 1) / 2;
  prog.rhs = Eigen::VectorXd::Constant(rows, -1.0);
  prog.entries.resize(rows);
  for (int r = 0; r < rows; ++r) prog.entries[r].push_back({r, 1.0});
  MatrixProgram::Aux lambda;
  lambda.cost = 1.0;
  lambda.name = "lambda";
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q)
      if (p == q || g.has_edge(p, q)) lambda.column.push_back({MatrixProgram::upper_index(n, p, q), -1.0});
  prog.aux.push_back(std::move(lambda));
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      MatrixProgram::Aux s;
      s.lower = 0.0;
      s.name = "N" + std::to_string(p) + "_" + std::to_string(q);
      s.column.push_back({MatrixProgram::upper_index(n, p, q), 1.0});
      prog.aux.push_back(std::move(s));
    }
  return prog;
}

namespace {

AtomSet initial(int n, CgMode mode) { return mode == CgMode::SOCP && n >= 2 ? gen_V2(n) : gen_U2(n); }

StableBound stable_bound(const Graph& g, CgMode mode, const conic::Params& params) {
  StableBound b;
  b.master = solve_master(stableset_program(g), initial(g.n(), mode), params);
  b.status = b.master.status;
  b.lambda = b.master.bound;
  return b;
}

const char* mode_name(CgMode m) { return m == CgMode::LP ? "lp" : "socp"; }
const char* pricing_name(Pricing p) { return p == Pricing::Eig ? "eig" : "triples"; }

}  // namespace

StableBound dsos1_bound(const Graph& g, const conic::Params& params) { return stable_bound(g, CgMode::LP, params); }
StableBound sdsos1_bound(const Graph& g, const conic::Params& params) { return stable_bound(g, CgMode::SOCP, params); }

CgTrace cg_stableset(const Graph& g, const StableCgConfig& cfg) {
  try {
    return run_matrix_cg(stableset_program(g), initial(g.n(), cfg.cg.mode), cfg.cg,
                         make_pricer(cfg.cg, cfg.pricing, cfg.t1, cfg.t2));
  } catch (const CgError& e) {
    // The initial master always has a feasible point (init_lambda).
    throw CgError(std::string("internal error: ") + e.what());
  }
}

Poly stable_set_form(const Graph& g, double lambda) {
  const int n = g.n();
  if (n < 1) throw GraphError("stable_set_form: empty node set");
  Poly p = Poly::zero(n, 4);
  const MonomialBasis& b = cached_basis(n, 4);
  Exponent e(n, 0);
  for (int i = 0; i < n; ++i) {
    e[i] = 4;
    p.coef[b.index(e)] = lambda - 1.0;
    e[i] = 2;
    for (int j = i + 1; j < n; ++j) {
      e[j] = 2;
      p.coef[b.index(e)] = 2.0 * (lambda * (g.has_edge(i, j) ? 1.0 : 0.0) - 1.0);
      e[j] = 0;
    }
    e[i] = 0;
  }
  return p;
}

RStableResult r_stable_bound(const Graph& g, int r, CgMode mode, double tol, const BoundOptions& opts) {
  const int n = g.n();
  const Poly s_r = sphere_multiplier(n, r);
  auto feasible = [&](double lambda) {
    const Poly target = r > 0 ? multiply(stable_set_form(g, lambda), s_r) : stable_set_form(g, lambda);
    const BoundResult b = form_bound(target, sphere_multiplier(n, 2 + r), mode, opts);
    if (b.status != conic::Status::Optimal)
      throw conic::ConicError("r_stable_bound: master returned " + conic::to_string(b.status));
    return b.lambda >= -1e-8;
  };
  RStableResult res;
  const StableBound start = mode == CgMode::LP ? dsos1_bound(g, opts.solver) : sdsos1_bound(g, opts.solver);
  double hi = std::max(start.lambda, 1.0);
  while (!feasible(hi)) hi *= 2.0;
  double lo = 1.0;
  while (lo > 0 && feasible(lo)) lo -= 1.0;
  if (lo <= 0) lo = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
    ++res.steps;
  }
  res.lambda = hi;

  // stable_set_form is λF₁ − F₀; min λ with (λF₁ − F₀)s^r in the cone is
  // −max μ with −F₀s^r − μF₁s^r in the cone.
  Poly target = stable_set_form(g, 0.0);
  Poly lam = stable_set_form(g, 1.0) - target;
  if (r > 0) {
    target = multiply(target, s_r);
    lam = multiply(lam, s_r);
  }
  const BoundResult direct = form_bound(target, lam, mode, opts);
  if (direct.status != conic::Status::Optimal)
    throw conic::ConicError("r_stable_bound: direct master returned " + conic::to_string(direct.status));
  res.direct = -direct.lambda;
  return res;
}

std::string summary_header() { return "graph,n,m,mode,pricing,final_bound,iters,converged"; }

std::string summary_line(const std::string& name, const Graph& g, CgMode mode, Pricing pricing, const CgTrace& t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t.final_bound());
  std::ostringstream os;
  os << name << ',' << g.n() << ',' << g.m() << ',' << mode_name(mode) << ',' << pricing_name(pricing) << ','
     << buf << ',' << (t.records.empty() ? 0 : t.records.back().iter) << ',' << (t.converged() ? "true" : "false");
  return os.str();
}

}  // namespace conecg
