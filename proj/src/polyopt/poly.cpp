#include "conecg/polyopt.hpp"

#include <cmath>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

namespace conecg {

namespace {

void generate(int n, int d, Exponent& cur, int pos, std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[pos] = e;
    generate(n, d - e, cur, pos + 1, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 0) throw PolyError("monomials: need n ≥ 1 and d ≥ 0");
  Exponent cur(n, 0);
  generate(n, d, cur, 0, exps_);
  for (int i = 0; i < size(); ++i) pos_.emplace(exps_[i], i);
}

int MonomialBasis::index(const Exponent& e) const {
  const auto it = pos_.find(e);
  return it == pos_.end() ? -1 : it->second;
}

MonomialBasis monomials(int n, int d) { return MonomialBasis(n, d); }

// Bases are immutable, so one shared instance per (n, d) is enough.
const MonomialBasis& cached_basis(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_unique<MonomialBasis>(n, d);
  return *slot;
}

std::uint64_t basis_size(int n, int d) {
  if (n < 1 || d < 0) return 0;
  // C(n+d−1, d), built up so every intermediate is an exact binomial.
  std::uint64_t r = 1;
  for (int i = 1; i <= d; ++i) r = r * static_cast<std::uint64_t>(n - 1 + i) / static_cast<std::uint64_t>(i);
  return r;
}

Poly Poly::zero(int n, int degree) {
  Poly p;
  p.n = n;
  p.degree = degree;
  p.coef = Eigen::VectorXd::Zero(cached_basis(n, degree).size());
  return p;
}

Poly Poly::from_terms(int n, const std::vector<std::pair<Exponent, double>>& terms) {
  if (terms.empty()) throw PolyError("from_terms: no terms");
  int deg = 0;
  for (int e : terms.front().first) deg += e;
  Poly p = zero(n, deg);
  const MonomialBasis& b = cached_basis(n, deg);
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != n) throw PolyError("from_terms: exponent length differs from n");
    int s = 0;
    for (int x : e) {
      if (x < 0) throw PolyError("from_terms: negative exponent");
      s += x;
    }
    if (s != deg) throw PolyError("from_terms: terms of different degrees");
    p.coef[b.index(e)] += c;
  }
  return p;
}

double Poly::eval(const Eigen::VectorXd& x) const {
  const MonomialBasis& b = cached_basis(n, degree);
  double v = 0;
  for (int i = 0; i < b.size(); ++i) {
    if (coef[i] == 0.0) continue;
    double m = coef[i];
    for (int k = 0; k < n; ++k)
      for (int e = 0; e < b[i][k]; ++e) m *= x[k];
    v += m;
  }
  return v;
}

Eigen::VectorXd Poly::gradient(const Eigen::VectorXd& x) const {
  const MonomialBasis& b = cached_basis(n, degree);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < b.size(); ++i) {
    if (coef[i] == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      if (b[i][k] == 0) continue;
      double m = coef[i] * b[i][k];
      for (int l = 0; l < n; ++l) {
        const int e = b[i][l] - (l == k ? 1 : 0);
        for (int t = 0; t < e; ++t) m *= x[l];
      }
      g[k] += m;
    }
  }
  return g;
}

bool Poly::is_even() const {
  const MonomialBasis& b = cached_basis(n, degree);
  for (int i = 0; i < b.size(); ++i) {
    if (coef[i] == 0.0) continue;
    for (int e : b[i])
      if (e % 2) return false;
  }
  return true;
}

namespace {

void check_same_space(const Poly& a, const Poly& b) {
  if (a.n != b.n || a.degree != b.degree) throw PolyError("polynomials live in different spaces");
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  check_same_space(a, b);
  Poly r = a;
  r.coef += b.coef;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  check_same_space(a, b);
  Poly r = a;
  r.coef -= b.coef;
  return r;
}

Poly operator*(double s, const Poly& a) {
  Poly r = a;
  r.coef *= s;
  return r;
}

Poly multiply(const Poly& a, const Poly& b) {
  if (a.n != b.n) throw PolyError("multiply: different numbers of variables");
  const MonomialBasis& ba = cached_basis(a.n, a.degree);
  const MonomialBasis& bb = cached_basis(b.n, b.degree);
  const MonomialBasis& br = cached_basis(a.n, a.degree + b.degree);
  Poly r = Poly::zero(a.n, a.degree + b.degree);
  Exponent e(a.n);
  for (int i = 0; i < ba.size(); ++i) {
    if (a.coef[i] == 0.0) continue;
    for (int j = 0; j < bb.size(); ++j) {
      if (b.coef[j] == 0.0) continue;
      for (int k = 0; k < a.n; ++k) e[k] = ba[i][k] + bb[j][k];
      r.coef[br.index(e)] += a.coef[i] * b.coef[j];
    }
  }
  return r;
}

Poly sphere_multiplier(int n, int d) {
  const MonomialBasis& half = cached_basis(n, d);
  const MonomialBasis& full = cached_basis(n, 2 * d);
  Poly p = Poly::zero(n, 2 * d);
  Exponent e(n);
  for (const auto& beta : half.exponents()) {
    // d! / Π βᵢ!
    double c = std::tgamma(d + 1.0);
    for (int k = 0; k < n; ++k) {
      c /= std::tgamma(beta[k] + 1.0);
      e[k] = 2 * beta[k];
    }
    p.coef[full.index(e)] = std::round(c);
  }
  return p;
}

Poly motzkin() {
  return Poly::from_terms(3, {{{4, 2, 0}, 1.0}, {{2, 4, 0}, 1.0}, {{2, 2, 2}, -3.0}, {{0, 0, 6}, 1.0}});
}

Poly read_poly(std::istream& in) {
  std::string line;
  int n = -1, deg = -1;
  std::vector<std::pair<Exponent, double>> terms;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string probe;
    if (!(ls >> probe)) continue;
    ls.clear();
    ls.str(line);
    auto fail = [&](const std::string& msg) {
      return PolyError("read_poly: line " + std::to_string(lineno) + ": " + msg);
    };
    if (n < 0) {
      if (!(ls >> n >> deg) || n < 1 || deg < 0) throw fail("expected header \"n degree\"");
      continue;
    }
    Exponent e(n);
    int s = 0;
    for (int k = 0; k < n; ++k) {
      if (!(ls >> e[k]) || e[k] < 0) throw fail("bad exponent");
      s += e[k];
    }
    double c = 0;
    if (!(ls >> c) || !std::isfinite(c)) throw fail("bad coefficient");
    if (ls >> probe) throw fail("trailing data");
    if (s != deg) throw fail("exponents do not sum to the degree");
    terms.emplace_back(std::move(e), c);
  }
  if (n < 0) throw PolyError("read_poly: missing header");
  Poly p = Poly::zero(n, deg);
  const MonomialBasis& b = cached_basis(n, deg);
  for (const auto& [e, c] : terms) p.coef[b.index(e)] += c;
  return p;
}

void write_poly(std::ostream& out, const Poly& p) {
  const MonomialBasis& b = cached_basis(p.n, p.degree);
  const auto prec = out.precision(17);
  out << p.n << ' ' << p.degree << '\n';
  for (int i = 0; i < b.size(); ++i) {
    if (p.coef[i] == 0.0) continue;
    for (int e : b[i]) out << e << ' ';
    out << p.coef[i] << '\n';
  }
  out.precision(prec);
}

GramMap gram_map(int n, int d) {
  GramMap g;
  g.n = n;
  g.d = d;
  g.half = cached_basis(n, d);
  g.full = cached_basis(n, 2 * d);
  const int m = g.half.size();
  g.positions.resize(g.full.size());
  g.monomial.resize(static_cast<std::size_t>(m) * (m + 1) / 2);
  Exponent e(n);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      for (int l = 0; l < n; ++l) e[l] = g.half[j][l] + g.half[k][l];
      const int idx = g.full.index(e);
      g.positions[idx].push_back({j, k});
      g.monomial[MatrixProgram::upper_index(m, j, k)] = idx;
    }
  return g;
}

Eigen::VectorXd GramMap::apply(const SymMatrixd& q) const {
  if (q.size() != half.size()) throw PolyError("GramMap::apply: Gram matrix has the wrong size");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(full.size());
  for (int i = 0; i < full.size(); ++i)
    for (const auto& p : positions[i]) c[i] += p.j == p.k ? q(p.j, p.j) : 2.0 * q(p.j, p.k);
  return c;
}

}  // namespace conecg
