#include <doctest.h>

#include "conecg/generators.hpp"
#include "conecg/stableset.hpp"

#include <cmath>
#include <sstream>

using namespace conecg;

namespace {

struct Named {
  const char* name;
  Graph g;
};

std::vector<Named> known_graphs() {
  return {{"path6", path_graph(6)},   {"cycle5", cycle_graph(5)},  {"cycle8", cycle_graph(8)},
          {"k5", complete_graph(5)},  {"empty4", empty_graph(4)},  {"petersen-complement", petersen_complement()},
          {"petersen", petersen()}};
}

// Independent α: try every subset.
int alpha_by_subsets(const Graph& g) {
  int best = 0;
  for (std::uint32_t s = 0; s < (1u << g.n()); ++s) {
    bool ok = true;
    for (const auto& [i, j] : g.edges()) ok = ok && !((s >> i & 1) && (s >> j & 1));
    if (ok) best = std::max(best, __builtin_popcount(s));
  }
  return best;
}

bool nonincreasing(const CgTrace& t, double tol = 1e-9) {
  for (std::size_t k = 1; k < t.records.size(); ++k)
    if (t.records[k].bound > t.records[k - 1].bound + tol * std::max(1.0, std::abs(t.records[k - 1].bound)))
      return false;
  return true;
}

}  // namespace

TEST_CASE("graphs") {
  const Graph p = petersen();
  CHECK(p.n() == 10);
  CHECK(p.m() == 15);
  for (int i = 0; i < 10; ++i) CHECK(p.degree(i) == 3);
  const Graph c = petersen_complement();
  CHECK(c.m() == 30);
  CHECK(c.min_degree() == 6);
  CHECK(complete_graph(4).m() == 6);
  CHECK(path_graph(1).m() == 0);
  CHECK(cycle_graph(5).has_edge(4, 0));
  CHECK((p.adjacency() + c.adjacency() + Eigen::MatrixXd::Identity(10, 10)).isApprox(Eigen::MatrixXd::Ones(10, 10)));
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), GraphError);
}

TEST_CASE("dimacs format") {
  std::stringstream ss;
  write_dimacs(ss, petersen());
  CHECK(ss.str().rfind("p edge 10 15\n", 0) == 0);
  const Graph g = read_dimacs(ss);
  CHECK(g.edges() == petersen().edges());
  std::istringstream with_comments("c hello\np edge 3 2\ne 1 2\n\ne 3 2\n");
  CHECK(read_dimacs(with_comments).edges() == std::vector<Graph::Edge>{{0, 1}, {1, 2}});
  for (const char* bad : {"e 1 2\n", "p edge 2 1\ne 1 3\n", "p edge 2 1\ne 1 1\n", "p edge 2 2\ne 1 2\n",
                          "p edge 2 1\nx 1 2\n", "", "p edge 2 1\ne 1\n", "p edge 2 1\ne 1 2 3\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_dimacs(in), GraphError);
  }
}

TEST_CASE("stability number") {
  for (const auto& [name, g] : known_graphs()) {
    INFO(name);
    CHECK(stability_number(g) == alpha_by_subsets(g));
  }
  CHECK(stability_number(petersen_complement()) == 2);
  CHECK(stability_number(cycle_graph(7)) == 3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = gen_er(14, 0.4, seed);
    CHECK(stability_number(g) == alpha_by_subsets(g));
  }
}

TEST_CASE("lp2 bound") {
  CHECK(lp2_bound(empty_graph(6)) == doctest::Approx(6.0).epsilon(1e-7));
  CHECK(lp2_bound(complete_graph(3)) == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(lp2_bound(petersen_complement()) == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(lp2_bound(path_graph(4)) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("initialization identity") {
  CHECK(init_lambda(petersen_complement()).lambda == 5);
  CHECK(init_lambda(complete_graph(6)).lambda == 2);
  CHECK(init_lambda(empty_graph(6)).lambda == 7);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 5 + static_cast<int>(seed % 36);
    const Graph g = gen_er(n, seed % 2 ? 0.3 : 0.8, seed);
    const InitLambda il = init_lambda(g);
    const Eigen::MatrixXd lhs =
        il.lambda * (Eigen::MatrixXd::Identity(n, n) + g.adjacency()) - Eigen::MatrixXd::Ones(n, n);
    CHECK(lhs == (il.d + il.nonneg).dense());
    CHECK(is_dd(il.d));
    CHECK(il.nonneg.dense().minCoeff() >= 0.0);
    const StableBound b = dsos1_bound(g);
    REQUIRE(b.status == conic::Status::Optimal);
    CHECK(b.lambda <= il.lambda + 1e-7);
  }
}

TEST_CASE("first-level bounds") {
  const Graph pc = petersen_complement();
  CHECK(dsos1_bound(pc).lambda == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(sdsos1_bound(pc).lambda == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(dsos1_bound(empty_graph(5)).lambda == doctest::Approx(5.0).epsilon(1e-7));
  for (int n : {2, 4, 7}) {
    CHECK(dsos1_bound(complete_graph(n)).lambda == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sdsos1_bound(complete_graph(n)).lambda == doctest::Approx(1.0).epsilon(1e-7));
  }
  for (const auto& [name, g] : known_graphs()) {
    INFO(name);
    const double d = dsos1_bound(g).lambda;
    const double s = sdsos1_bound(g).lambda;
    CHECK(s <= d + 1e-8);
    CHECK(s >= stability_number(g) - 1e-7);
  }
}

TEST_CASE("program dual matches the stable set dual") {
  // (A+I)·X = 1 and X ≥ 0 entrywise at the optimum.
  const Graph g = cycle_graph(5);
  const MatrixProgram prog = stableset_program(g);
  const MasterResult r = solve_master(prog, gen_U2(5));
  REQUIRE(r.optimal());
  const SymMatrixd x = assemble_dual_matrix(prog, r.mu);
  const Eigen::MatrixXd ai = g.adjacency() + Eigen::MatrixXd::Identity(5, 5);
  CHECK(ai.cwiseProduct(x.dense()).sum() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(x.dense().minCoeff() >= -1e-7);
  CHECK(x.dense().sum() == doctest::Approx(r.bound).epsilon(1e-6));
}

TEST_CASE("column generation traces") {
  const Graph pc = petersen_complement();
  StableCgConfig cfg;
  cfg.cg.mode = CgMode::SOCP;
  cfg.cg.max_iters = 6;
  const CgTrace s = cg_stableset(pc, cfg);
  CHECK(s.final_bound() < 3.0);
  CHECK(nonincreasing(s));
  cfg.cg.mode = CgMode::LP;
  cfg.cg.max_iters = 20;
  const CgTrace l = cg_stableset(pc, cfg);
  CHECK(l.final_bound() < 3.0);
  CHECK(nonincreasing(l));

  const CgTrace e = cg_stableset(empty_graph(6), cfg);
  CHECK(e.converged());
  CHECK(e.records.size() == 1);
  CHECK(e.final_bound() == doctest::Approx(6.0).epsilon(1e-7));

  for (const auto& [name, g] : known_graphs()) {
    INFO(name);
    const int alpha = stability_number(g);
    for (CgMode mode : {CgMode::LP, CgMode::SOCP})
      for (Pricing pricing : {Pricing::Eig, Pricing::Triples}) {
        StableCgConfig c;
        c.cg.mode = mode;
        c.pricing = pricing;
        c.cg.max_iters = 15;
        const CgTrace t = cg_stableset(g, c);
        CHECK(nonincreasing(t));
        for (const auto& r : t.records) CHECK(r.bound >= alpha - 1e-6);
        const double first = mode == CgMode::LP ? dsos1_bound(g).lambda : sdsos1_bound(g).lambda;
        CHECK(t.records.front().bound == doctest::Approx(first).epsilon(1e-9));
        CHECK(t.final_bound() <= sdsos1_bound(g).lambda + 1e-7);
      }
  }
}

TEST_CASE("stable set form") {
  CHECK(stable_set_form(complete_graph(2), 1.0).coef.isZero());
  // 2I − J on the empty graph: (x₁² − x₂²)².
  const Poly p = stable_set_form(empty_graph(2), 2.0);
  CHECK(p.coef == Poly::from_terms(2, {{{4, 0}, 1}, {{2, 2}, -2}, {{0, 4}, 1}}).coef);
  CHECK(dsos_bound(p).lambda >= -1e-8);
  // zᵀMz with z = x∘x.
  const Graph g = gen_er(6, 0.5, 3);
  const Poly f = stable_set_form(g, 2.5);
  const Eigen::MatrixXd m = 2.5 * (Eigen::MatrixXd::Identity(6, 6) + g.adjacency()) - Eigen::MatrixXd::Ones(6, 6);
  Eigen::VectorXd x(6);
  x << 0.3, -1.2, 0.7, 2.0, -0.1, 0.9;
  const Eigen::VectorXd z = x.cwiseProduct(x);
  CHECK(f.eval(x) == doctest::Approx(z.dot(m * z)).epsilon(1e-12));
}

TEST_CASE("r = 0 bisection reproduces the first level") {
  const Graph g = cycle_graph(5);
  const RStableResult d = r_stable_bound(g, 0, CgMode::LP);
  CHECK(std::abs(d.direct - dsos1_bound(g).lambda) <= 1e-6);
  CHECK(std::abs(d.lambda - d.direct) <= 1e-3);
  CHECK(d.lambda >= d.direct - 1e-6);
}

TEST_CASE("summary line") {
  CgTrace t;
  t.records.push_back({0, 4.0, 100, "Optimal", 1.0});
  t.records.push_back({1, 3.5, 1, "Optimal", 2.0});
  t.termination = CgTermination::MaxIters;
  CHECK(summary_header() == "graph,n,m,mode,pricing,final_bound,iters,converged");
  CHECK(summary_line("pc", petersen_complement(), CgMode::SOCP, Pricing::Eig, t) ==
        "pc,10,30,socp,eig,3.5,1,false");
}

TEST_CASE("erdos-renyi generator") {
  CHECK(gen_er(12, 0.0, 1).m() == 0);
  CHECK(gen_er(12, 1.0, 1).m() == 66);
  CHECK(gen_er(30, 0.5, 9).edges() == gen_er(30, 0.5, 9).edges());
  const Graph g = gen_er(200, 0.3, 4);
  const double pairs = 200.0 * 199 / 2;
  CHECK(std::abs(g.m() - 0.3 * pairs) <= 4 * std::sqrt(pairs * 0.3 * 0.7));
  CHECK_THROWS_AS(gen_er(5, 1.5, 1), GraphError);
}
