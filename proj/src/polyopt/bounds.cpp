#include "conecg/polyopt.hpp"
#include "conecg/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

namespace conecg {

MatrixProgram gram_program(const Poly& target, const Poly& lambda_poly, const GramMap& map) {
  if (target.n != map.n || lambda_poly.n != map.n || target.degree != 2 * map.d || lambda_poly.degree != 2 * map.d)
    throw PolyError("gram_program: polynomial does not match the Gram map");
  const int m = map.half.size();
  MatrixProgram prog;
  prog.n = m;
  prog.sense = conic::Sense::Maximize;
  prog.rhs = target.coef;
  prog.entries.resize(static_cast<std::size_t>(m) * (m + 1) / 2);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      const int u = MatrixProgram::upper_index(m, j, k);
      prog.entries[u].push_back({map.monomial[u], j == k ? 1.0 : 2.0});
    }
  MatrixProgram::Aux lambda;
  lambda.cost = 1.0;
  lambda.name = "lambda";
  for (int i = 0; i < lambda_poly.coef.size(); ++i)
    if (lambda_poly.coef[i] != 0.0) lambda.column.push_back({i, lambda_poly.coef[i]});
  prog.aux.push_back(std::move(lambda));
  return prog;
}

namespace {

// Atoms that only couple monomials with the same exponent parity pattern.
AtomSet parity_atoms(const MonomialBasis& half, CgMode mode) {
  const int m = half.size();
  std::vector<std::vector<char>> parity(m);
  std::map<std::vector<char>, int> class_size;
  for (int j = 0; j < m; ++j) {
    for (int e : half[j]) parity[j].push_back(static_cast<char>(e % 2));
    ++class_size[parity[j]];
  }
  AtomSet s;
  if (mode == CgMode::LP) {
    for (int j = 0; j < m; ++j) s.add(RankOneAtom::unit(m, j));
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        if (parity[j] == parity[k]) {
          s.add(RankOneAtom::structured(m, {{j, 1}, {k, 1}}));
          s.add(RankOneAtom::structured(m, {{j, 1}, {k, -1}}));
        }
    return s;
  }
  for (int j = 0; j < m; ++j)
    if (class_size[parity[j]] == 1) s.add(RankOneAtom::unit(m, j));
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      if (parity[j] == parity[k]) s.add(PairAtom::structured(m, j, k));
  return s;
}

AtomSet initial_atoms(int m, CgMode mode) {
  return mode == CgMode::SOCP && m >= 2 ? gen_V2(m) : gen_U2(m);
}

}  // namespace

BoundResult form_bound(const Poly& target, const Poly& lambda_poly, CgMode mode, const BoundOptions& opts) {
  if (target.degree % 2 != 0) throw PolyError("form_bound: odd degree");
  const int d = target.degree / 2;
  const std::uint64_t m = basis_size(target.n, d);
  if (m > static_cast<std::uint64_t>(opts.gram_cap))
    throw PolyError("form_bound: Gram basis of size " + std::to_string(m) + " exceeds the cap of " +
                    std::to_string(opts.gram_cap));
  const GramMap map = gram_map(target.n, d);
  const MatrixProgram prog = gram_program(target, lambda_poly, map);
  const bool symmetric = opts.exploit_symmetry && target.is_even() && lambda_poly.is_even();
  const AtomSet atoms = symmetric ? parity_atoms(map.half, mode) : initial_atoms(map.half.size(), mode);
  BoundResult r;
  r.gram_size = map.half.size();
  r.num_atoms = atoms.size();
  r.master = solve_master(prog, atoms, opts.solver);
  r.status = r.master.status;
  r.lambda = r.master.bound;
  return r;
}

BoundResult dsos_bound(const Poly& p, const BoundOptions& opts) { return r_dsos_bound(p, 0, opts); }
BoundResult sdsos_bound(const Poly& p, const BoundOptions& opts) { return r_sdsos_bound(p, 0, opts); }

namespace {

BoundResult r_bound(const Poly& p, int r, CgMode mode, const BoundOptions& opts) {
  if (r < 0) throw PolyError("r must be nonnegative");
  if (p.degree % 2 != 0) throw PolyError("bound: odd degree");
  const int d = p.degree / 2;
  Poly target = p;
  if (r > 0) target = multiply(p, sphere_multiplier(p.n, r));
  return form_bound(target, sphere_multiplier(p.n, d + r), mode, opts);
}

}  // namespace

BoundResult r_dsos_bound(const Poly& p, int r, const BoundOptions& opts) { return r_bound(p, r, CgMode::LP, opts); }
BoundResult r_sdsos_bound(const Poly& p, int r, const BoundOptions& opts) { return r_bound(p, r, CgMode::SOCP, opts); }

TriplesResult price_triples(const SymMatrixd& b, TripleCursor& cursor, std::size_t t1, std::size_t t2, double tol) {
  if (cursor.dim() != b.size()) throw PolyError("price_triples: cursor dimension mismatch");
  struct Hit {
    double value;
    std::uint64_t pos;
    TripleCursor::Triple t;
  };
  const double thr = -tol * std::max(1.0, b.norm());
  std::vector<Hit> hits;
  TriplesResult res;
  const std::uint64_t len = cursor.cycle_length();
  while (res.scanned < len && hits.size() < t1) {
    const double v = triple_value(cursor.current(), b);
    if (v < thr) hits.push_back({v, cursor.position(), cursor.current()});
    cursor.advance();
    ++res.scanned;
  }
  res.full_cycle = res.scanned == len;
  res.violations = hits.size();
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.value != b.value ? a.value < b.value : a.pos < b.pos; });
  for (std::size_t i = 0; i < std::min(t2, hits.size()); ++i) {
    std::vector<RankOneAtom::Entry> e;
    for (int a = 0; a < hits[i].t.size; ++a) e.push_back({hits[i].t.idx[a], hits[i].t.sign[a]});
    res.atoms.push_back(RankOneAtom::structured(static_cast<int>(b.size()), std::move(e)));
  }
  return res;
}

Pricer make_pricer(const CgConfig& cfg, Pricing pricing, std::size_t t1, std::size_t t2) {
  if (pricing == Pricing::Eig) return eig_pricer(cfg);
  auto cursor = std::make_shared<std::unique_ptr<TripleCursor>>();
  return [cfg, t1, t2, cursor](const MatrixProgram& prog, const MasterResult& master, const AtomSet&) {
    PricingOutput out;
    const SymMatrixd x = assemble_dual_matrix(prog, master.mu);
    if (is_psd(x, cfg.psd_tol)) {
      out.converged = true;
      return out;
    }
    if (!*cursor) *cursor = std::make_unique<TripleCursor>(prog.n);
    TriplesResult tr = price_triples(x, **cursor, t1, t2);
    for (auto& a : tr.atoms) out.atoms.push_back(std::move(a));
    return out;
  };
}

CgTrace cg_polymin(const Poly& p, const PolyCgConfig& cfg) {
  if (p.degree % 2 != 0 || p.degree == 0) throw PolyError("cg_polymin: need a form of positive even degree");
  const int d = p.degree / 2;
  const GramMap map = gram_map(p.n, d);
  MatrixProgram prog = gram_program(p, sphere_multiplier(p.n, d), map);
  Pricer base = make_pricer(cfg.cg, cfg.pricing, cfg.t1, cfg.t2);
  Pricer pricer = base;
  if (cfg.amgm) {
    auto used = std::make_shared<std::set<std::vector<int>>>();
    const MonomialBasis full = map.full;
    pricer = [base, used, full, cfg](const MatrixProgram& pr, const MasterResult& master, const AtomSet& atoms) {
      PricingOutput out = base(pr, master, atoms);
      const AmgmResult a = amgm_separation(master.mu, full, cfg.amgm_k, cfg.amgm_node_cap);
      const double scale = std::max(1.0, master.mu.lpNorm<Eigen::Infinity>());
      if (a.status == AmgmResult::Status::Found && a.objective < -1e-9 * scale) {
        std::vector<int> key = a.c;
        key.push_back(-1 - a.y);
        if (used->insert(key).second) {
          MatrixProgram::Aux col;
          col.lower = 0.0;
          col.name = "amgm";
          for (int i = 0; i < a.q.coef.size(); ++i)
            if (a.q.coef[i] != 0.0) col.column.push_back({i, a.q.coef[i]});
          out.columns.push_back(std::move(col));
          out.converged = false;
        }
      }
      return out;
    };
  }
  try {
    return run_matrix_cg(std::move(prog), initial_atoms(map.half.size(), cfg.cg.mode), cfg.cg, pricer);
  } catch (const CgError& e) {
    // The initial dsos/sdsos master is always feasible, so this is a defect.
    throw PolyError(std::string("internal error: initial master failed: ") + e.what());
  }
}

AmgmResult amgm_separation(const Eigen::VectorXd& mu, const MonomialBasis& basis, int k, std::uint64_t node_cap) {
  if (k < 2) throw PolyError("amgm_separation: k must be at least 2");
  if (mu.size() != basis.size()) throw PolyError("amgm_separation: multiplier length mismatch");
  const int n = basis.num_vars();
  std::vector<int> even;
  for (int i = 0; i < basis.size(); ++i) {
    bool ok = true;
    for (int e : basis[i]) ok = ok && e % 2 == 0;
    if (ok) even.push_back(i);
  }
  const int ne = static_cast<int>(even.size());
  std::vector<double> suffix_min(ne + 1, std::numeric_limits<double>::infinity());
  for (int t = ne - 1; t >= 0; --t) suffix_min[t] = std::min(suffix_min[t + 1], mu[even[t]]);
  std::vector<int> pos_in_even(basis.size(), -1);
  for (int t = 0; t < ne; ++t) pos_in_even[even[t]] = t;

  AmgmResult res;
  double best = 0.0;
  std::vector<int> chosen, best_c;
  int best_y = -1;
  bool budget = false;
  Exponent deficit(n);

  // Picks `rem` more monomials from even[start..] covering `deficit` exactly.
  std::function<void(int, int, double, int)> dfs = [&](int start, int rem, double partial, int y) {
    if (budget) return;
    if (++res.nodes > node_cap) {
      budget = true;
      return;
    }
    const double base = partial - k * mu[y];
    if (rem == 0) {
      if (base < best) {
        best = base;
        best_c = chosen;
        best_y = y;
      }
      return;
    }
    // Every remaining pick costs at least suffix_min[start].
    if (start >= ne || base + rem * suffix_min[start] >= best) return;
    if (rem == 1) {
      const int idx = basis.index(deficit);
      if (idx < 0 || idx == y) return;
      const int t = pos_in_even[idx];
      if (t < start) return;
      chosen.push_back(idx);
      dfs(ne, 0, partial + mu[idx], y);
      chosen.pop_back();
      return;
    }
    for (int t = start; t < ne; ++t) {
      const double rest = rem > 1 ? (rem - 1) * suffix_min[t + 1] : 0.0;
      if (base + mu[even[t]] + rest >= best) continue;
      const int c = even[t];
      if (c == y) continue;
      bool fits = true;
      for (int l = 0; l < n && fits; ++l) fits = basis[c][l] <= deficit[l];
      if (!fits) continue;
      for (int l = 0; l < n; ++l) deficit[l] -= basis[c][l];
      chosen.push_back(c);
      dfs(t + 1, rem - 1, partial + mu[c], y);
      chosen.pop_back();
      for (int l = 0; l < n; ++l) deficit[l] += basis[c][l];
      if (budget) return;
    }
  };

  for (int y = 0; y < basis.size() && !budget; ++y) {
    for (int l = 0; l < n; ++l) deficit[l] = k * basis[y][l];
    dfs(0, k, 0.0, y);
  }
  if (budget) {
    res.status = AmgmResult::Status::Budget;
    return res;
  }
  if (best_y < 0) return res;
  res.status = AmgmResult::Status::Found;
  res.objective = best;
  res.c = best_c;
  res.y = best_y;
  res.q = Poly::zero(n, basis.degree());
  for (int c : best_c) res.q.coef[c] = 1.0;
  res.q.coef[best_y] = -k;
  return res;
}

double sphere_min_oracle(const Poly& p, int samples, std::uint64_t seed) {
  if (samples < 1) throw PolyError("sphere_min_oracle: need at least one sample");
  const int n = p.n;
  Rng rng(seed);
  std::vector<std::pair<double, Eigen::VectorXd>> pts;
  auto consider = [&](Eigen::VectorXd x) {
    x.normalize();
    pts.emplace_back(p.eval(x), std::move(x));
  };
  for (int i = 0; i < n; ++i) consider(Eigen::VectorXd::Unit(n, i));
  consider(Eigen::VectorXd::Ones(n));
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    if (x.norm() > 0) consider(std::move(x));
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = pts.front().first;
  const std::size_t polish = std::min<std::size_t>(pts.size(), 8);
  for (std::size_t c = 0; c < polish; ++c) {
    Eigen::VectorXd x = pts[c].second;
    double fx = pts[c].first;
    double step = 0.1;
    for (int it = 0; it < 2000 && step > 1e-16; ++it) {
      const Eigen::VectorXd g = p.gradient(x);
      const Eigen::VectorXd rg = g - g.dot(x) * x;
      if (rg.norm() < 1e-14) break;
      const Eigen::VectorXd y = (x - step * rg).normalized();
      const double fy = p.eval(y);
      if (fy < fx) {
        x = y;
        fx = fy;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    best = std::min(best, fx);
  }
  return best;
}

}  // namespace conecg
