#include <doctest.h>

#include "conecg/atoms.hpp"
#include "conecg/cg.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace conecg;

namespace {

// Canonical classes of vectors in {−1,0,1}ⁿ with 1..3 nonzeros, by brute force.
std::set<std::vector<int>> brute_classes(int n) {
  std::set<std::vector<int>> out;
  std::vector<int> v(n, -1);
  while (true) {
    int nz = 0;
    for (int x : v) nz += x != 0;
    if (nz >= 1 && nz <= 3) {
      std::vector<int> c = v;
      for (int x : v)
        if (x != 0) {
          if (x < 0)
            for (int& y : c) y = -y;
          break;
        }
      out.insert(c);
    }
    int i = 0;
    while (i < n && v[i] == 1) v[i++] = -1;
    if (i == n) break;
    ++v[i];
  }
  return out;
}

std::vector<int> as_vector(const TripleCursor::Triple& t, int n) {
  std::vector<int> v(n, 0);
  for (int a = 0; a < t.size; ++a) v[t.idx[a]] = t.sign[a];
  return v;
}

MatrixProgram membership_program(const SymMatrixd& a) {
  const int n = static_cast<int>(a.size());
  MatrixProgram p;
  p.n = n;
  p.rhs.resize(n * (n + 1) / 2);
  p.entries.resize(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int r = MatrixProgram::upper_index(n, i, j);
      p.rhs[r] = a(i, j);
      p.entries[r].push_back({r, 1.0});
    }
  return p;
}

}  // namespace

TEST_CASE("gen_U2 has n^2 dd atoms") {
  for (int n = 1; n <= 30; ++n) {
    const AtomSet s = gen_U2(n);
    CHECK(s.size() == static_cast<std::size_t>(n * n));
    for (const auto& a : s) CHECK(is_dd(std::get<RankOneAtom>(a).outer()));
  }
  const AtomSet two = gen_U2(2);
  CHECK(std::get<RankOneAtom>(two[0]).vector() == Eigen::Vector2d(1, 0));
  CHECK(std::get<RankOneAtom>(two[1]).vector() == Eigen::Vector2d(0, 1));
  CHECK(std::get<RankOneAtom>(two[2]).vector() == Eigen::Vector2d(1, 1));
  CHECK(std::get<RankOneAtom>(two[3]).vector() == Eigen::Vector2d(1, -1));
  CHECK(gen_U2(10).size() == 100);
  CHECK_THROWS(gen_U2(0));
}

TEST_CASE("gen_V2 enumerates index pairs") {
  CHECK(gen_V2(2).size() == 1);
  CHECK(gen_V2(10).size() == 45);
  const AtomSet s = gen_V2(3);
  REQUIRE(s.size() == 3);
  const int expect[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    const auto& p = std::get<PairAtom>(s[k]);
    CHECK(p.first() == expect[k][0]);
    CHECK(p.second() == expect[k][1]);
  }
}

TEST_CASE("triple cursor enumerates each canonical class once per cycle") {
  for (int n = 1; n <= 6; ++n) {
    TripleCursor c(n);
    const auto expected = brute_classes(n);
    CHECK(c.cycle_length() == expected.size());
    std::set<std::vector<int>> seen;
    for (std::uint64_t k = 0; k < c.cycle_length(); ++k) {
      CHECK(c.position() == k);
      CHECK(c.current().sign[0] == 1);
      seen.insert(as_vector(c.current(), n));
      c.advance();
    }
    CHECK(seen == expected);
    CHECK(c.position() == 0);  // wrapped
  }
}

TEST_CASE("triple cursor counts") {
  CHECK(TripleCursor(3).cycle_length() == 13);
  TripleCursor c(4);
  int three = 0;
  for (std::uint64_t k = 0; k < c.cycle_length(); ++k, c.advance()) three += c.current().size == 3;
  CHECK(three == 16);
}

TEST_CASE("triple cursor order starts depth first") {
  TripleCursor c(3);
  std::vector<std::vector<int>> first;
  for (int k = 0; k < 8; ++k, c.advance()) first.push_back(as_vector(c.current(), 3));
  const std::vector<std::vector<int>> expect = {{1, 0, 0},  {1, 1, 0},  {1, -1, 0}, {1, 1, 1},
                                                {1, 1, -1}, {1, -1, 1}, {1, -1, -1}, {1, 0, 1}};
  CHECK(first == expect);
}

TEST_CASE("triple cursor save and restore") {
  TripleCursor c(7);
  for (int k = 0; k < 123; ++k) c.advance();
  TripleCursor copy = c;
  TripleCursor restored = TripleCursor::restore(7, c.save());
  for (int k = 0; k < 500; ++k) {
    CHECK(as_vector(copy.current(), 7) == as_vector(c.current(), 7));
    CHECK(as_vector(restored.current(), 7) == as_vector(c.current(), 7));
    c.advance();
    copy.advance();
    restored.advance();
  }
  CHECK_THROWS(TripleCursor::restore(7, "garbage"));
  CHECK_THROWS(TripleCursor::restore(7, "0 3 0 5 2 1 1 1"));
}

TEST_CASE("atom_value") {
  CHECK(atom_value(RankOneAtom::unit(2, 0), SymMatrixd::Diagonal(Eigen::Vector2d(5, 1))) == 5.0);
  const Atom ones = RankOneAtom::structured(3, {{0, 1}, {1, 1}, {2, 1}});
  CHECK(atom_value(ones, -1.0 * SymMatrixd::Ones(3)) == -9.0);
  CHECK(atom_value(PairAtom::structured(3, 0, 1), SymMatrixd::Diagonal(Eigen::Vector3d(-1, -2, 7))) == -2.0);
  CHECK_THROWS(atom_value(ones, SymMatrixd::Identity(2)));
  // Dense pair atom agrees with the 2×2 eigenvalue of VᵀBV.
  PairAtom::Basis v(3, 2);
  v << 1, 0, 1, 1, 0, 1;
  const SymMatrixd b = SymMatrixd::Diagonal(Eigen::Vector3d(1, -1, 2));
  const PairAtom pa = PairAtom::dense(v);
  const Eigen::Matrix2d m = pa.basis().transpose() * b.dense() * pa.basis();
  CHECK(atom_value(pa, b) == doctest::Approx(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()[0]));
}

TEST_CASE("atom construction and canonical sign") {
  const RankOneAtom a = RankOneAtom::structured(4, {{3, 1}, {1, -1}});
  CHECK(a.entries()[0].index == 1);
  CHECK(a.entries()[0].sign == 1);
  CHECK(a.entries()[1].sign == -1);
  CHECK_THROWS(RankOneAtom::structured(4, {}));
  CHECK_THROWS(RankOneAtom::structured(4, {{4, 1}}));
  CHECK_THROWS(RankOneAtom::structured(4, {{1, 1}, {1, -1}}));
  CHECK_THROWS(RankOneAtom::dense(Eigen::Vector3d::Zero()));
  const RankOneAtom d = RankOneAtom::dense(Eigen::Vector3d(0, -3, 4));
  CHECK(d.vector().norm() == doctest::Approx(1));
  CHECK(d.vector()[1] > 0);
  PairAtom::Basis dep(2, 2);
  dep << 1, 2, 1, 2;
  CHECK_THROWS(PairAtom::dense(dep));
}

TEST_CASE("atom set rejects duplicates") {
  AtomSet s;
  CHECK(s.add(RankOneAtom::structured(3, {{0, 1}, {2, -1}})));
  CHECK_FALSE(s.add(RankOneAtom::structured(3, {{0, -1}, {2, 1}})));
  CHECK(s.add(RankOneAtom::dense(Eigen::Vector3d(1, 2, 3))));
  CHECK_FALSE(s.add(RankOneAtom::dense(Eigen::Vector3d(-2, -4, -6))));
  CHECK(s.add(RankOneAtom::dense(Eigen::Vector3d(1, 2, 3.001))));
  PairAtom::Basis v(3, 2);
  v << 1, 0, 0, 1, 0, 0;
  CHECK(s.add(PairAtom::dense(v)));
  PairAtom::Basis w(3, 2);
  w << 1, 1, 1, -1, 0, 0;  // same column space
  CHECK_FALSE(s.add(PairAtom::dense(w)));
  CHECK(s.add(PairAtom::structured(3, 0, 1)));
  CHECK_FALSE(s.add(PairAtom::structured(3, 1, 0)));
  CHECK(s.size() == 5);
}

TEST_CASE("atom text round trip") {
  const std::vector<Atom> atoms = {RankOneAtom::structured(5, {{1, 1}, {3, -1}}),
                                   RankOneAtom::dense(Eigen::VectorXd::LinSpaced(5, -1, 3)),
                                   PairAtom::structured(5, 1, 4)};
  CHECK(to_string(atoms[0]) == "u 1:1 3:-1");
  for (const auto& a : atoms) {
    const Atom b = parse_atom(to_string(a), 5);
    CHECK(to_string(b) == to_string(a));
    if (a.index() == 1) CHECK(std::get<PairAtom>(b).is_structured());
    CHECK(b.index() == a.index());
  }
  CHECK_THROWS(parse_atom("x 1", 5));
  CHECK_THROWS(parse_atom("u 1:2", 5));
  CHECK_THROWS(parse_atom("d 4 1 2 3 4", 5));
}

TEST_CASE("cone of gen_U2 is the dd cone") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 7);
  for (int t = 0; t < 200; ++t) {
    const int n = dim(rng);
    SymMatrixd a(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) a.set(i, j, nd(rng));
    for (int i = 0; i < n; ++i) {
      double off = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) off += std::abs(a(i, j));
      a.set(i, i, off + u(rng));
    }
    const bool want_dd = t % 2 == 0;
    if (!want_dd) {
      // Push one diagonal strictly below its row sum.
      const int i = t % n;
      double off = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) off += std::abs(a(i, j));
      a.set(i, i, off - 0.05 - u(rng));
    }
    REQUIRE(is_dd(a) == want_dd);
    const MasterResult r = solve_master(membership_program(a), gen_U2(n));
    CHECK(r.optimal() == want_dd);
    if (!want_dd) CHECK(r.status == conic::Status::Infeasible);
  }
}
