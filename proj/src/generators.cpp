#include "conecg/generators.hpp"
#include "conecg/random.hpp"

namespace conecg {

Poly gen_quartic(int n, std::uint64_t seed) {
  if (n < 2) throw PolyError("gen_quartic: need n ≥ 2");
  Rng rng(seed);
  Poly p = Poly::zero(n, 4);
  for (int i = 0; i < p.coef.size(); ++i) p.coef[i] = rng.normal();
  return p;
}

Graph gen_er(int n, double p, std::uint64_t seed) {
  if (n < 0) throw GraphError("gen_er: negative node count");
  if (!(p >= 0.0 && p <= 1.0)) throw GraphError("gen_er: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Graph::Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

SdpProblem gen_spectrahedron(int n, std::uint64_t seed) {
  if (n < 2) throw CgError("gen_spectrahedron: need n ≥ 2");
  Rng rng(seed);
  auto draw = [&] {
    SymMatrixd m(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m.set(i, j, rng.normal());
    return m;
  };
  const SymMatrixd e = draw();
  const SymMatrixd f = draw();
  SdpProblem p;
  p.c = SymMatrixd::Identity(n);
  p.a = {-1.0 * e, -1.0 * f};
  p.b = Eigen::VectorXd::Ones(2);
  return p;
}

}  // namespace conecg
