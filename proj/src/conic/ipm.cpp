#include "ipm.hpp"

#include "ldl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace conecg::conic::detail {

namespace {

constexpr double kStaticReg = 7e-8;
constexpr double kDynamicEps = 1e-13;
constexpr double kDynamicDelta = 2e-7;
constexpr int kRefineSteps = 10;
constexpr double kRefineTol = 1e-14;
constexpr double kStepFraction = 0.99;
constexpr double kMinStep = 1e-10;
constexpr int kEquilibrationPasses = 10;

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

struct Equilibration {
  Eigen::VectorXd col;    // x = col ∘ x̄
  Eigen::VectorXd row_a;  // ȳ rows scale
  Eigen::VectorXd row_g;
};

Equilibration equilibrate(ConeProgram& p, bool enabled) {
  const auto n = p.c.size();
  Equilibration e{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Ones(p.b.size()),
                  Eigen::VectorXd::Ones(p.h.size())};
  if (!enabled) return e;
  auto clamp_scale = [](double mx) {
    if (mx <= 0.0) return 1.0;
    return std::clamp(1.0 / std::sqrt(mx), 1e-3, 1e3);
  };
  for (int pass = 0; pass < kEquilibrationPasses; ++pass) {
    Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd amax = Eigen::VectorXd::Zero(p.b.size());
    Eigen::VectorXd gmax = Eigen::VectorXd::Zero(p.h.size());
    for (int j = 0; j < p.a.outerSize(); ++j)
      for (SpMat::InnerIterator it(p.a, j); it; ++it) {
        const double v = std::abs(it.value());
        cmax[j] = std::max(cmax[j], v);
        amax[it.row()] = std::max(amax[it.row()], v);
      }
    for (int j = 0; j < p.g.outerSize(); ++j)
      for (SpMat::InnerIterator it(p.g, j); it; ++it) {
        const double v = std::abs(it.value());
        cmax[j] = std::max(cmax[j], v);
        gmax[it.row()] = std::max(gmax[it.row()], v);
      }
    // A second-order cone must be scaled uniformly.
    int off = p.cones.nonneg;
    for (int q : p.cones.soc) {
      const double m = gmax.segment(off, q).maxCoeff();
      gmax.segment(off, q).setConstant(m);
      off += q;
    }
    Eigen::VectorXd dc = cmax.unaryExpr(clamp_scale);
    Eigen::VectorXd da = amax.unaryExpr(clamp_scale);
    Eigen::VectorXd dg = gmax.unaryExpr(clamp_scale);
    p.a = da.asDiagonal() * p.a * dc.asDiagonal();
    p.g = dg.asDiagonal() * p.g * dc.asDiagonal();
    e.col = e.col.cwiseProduct(dc);
    e.row_a = e.row_a.cwiseProduct(da);
    e.row_g = e.row_g.cwiseProduct(dg);
  }
  p.c = p.c.cwiseProduct(e.col);
  p.b = p.b.cwiseProduct(e.row_a);
  p.h = p.h.cwiseProduct(e.row_g);
  return e;
}

/// KKT matrix [[0, Aᵀ, Gᵀ], [A, 0, 0], [G, 0, −W²]] in upper-triangular storage.
class Kkt {
 public:
  Kkt(const ConeProgram& p) : n_(p.c.size()), p_(p.b.size()), m_(p.h.size()), cones_(p.cones) {
    const int dim = static_cast<int>(n_ + p_ + m_);
    std::vector<Eigen::Triplet<double, int>> t;
    t.reserve(p.a.nonZeros() + p.g.nonZeros() + dim + 6 * cones_.soc.size());
    for (int j = 0; j < n_; ++j) t.emplace_back(j, j, 0.0);
    for (int j = 0; j < p.a.outerSize(); ++j)
      for (SpMat::InnerIterator it(p.a, j); it; ++it)
        t.emplace_back(j, static_cast<int>(n_ + it.row()), it.value());
    for (int r = 0; r < p_; ++r) t.emplace_back(n_ + r, n_ + r, 0.0);
    for (int j = 0; j < p.g.outerSize(); ++j)
      for (SpMat::InnerIterator it(p.g, j); it; ++it)
        t.emplace_back(j, static_cast<int>(n_ + p_ + it.row()), it.value());
    const int z0 = static_cast<int>(n_ + p_);
    for (int i = 0; i < cones_.nonneg; ++i) t.emplace_back(z0 + i, z0 + i, -1.0);
    int off = cones_.nonneg;
    for (int q : cones_.soc) {
      for (int b = 0; b < q; ++b)
        for (int a = 0; a <= b; ++a) t.emplace_back(z0 + off + a, z0 + off + b, a == b ? -1.0 : 0.0);
      off += q;
    }
    k_.resize(dim, dim);
    k_.setFromTriplets(t.begin(), t.end());
    k_.makeCompressed();

    // Value slots of the −W² block, in the order update() writes them.
    auto slot = [&](int row, int col) {
      const int* begin = k_.innerIndexPtr() + k_.outerIndexPtr()[col];
      const int* end = k_.innerIndexPtr() + k_.outerIndexPtr()[col + 1];
      const int* it = std::lower_bound(begin, end, row);
      return static_cast<int>(it - k_.innerIndexPtr());
    };
    for (int i = 0; i < cones_.nonneg; ++i) slots_.push_back(slot(z0 + i, z0 + i));
    off = cones_.nonneg;
    for (int q : cones_.soc) {
      for (int b = 0; b < q; ++b)
        for (int a = 0; a <= b; ++a) slots_.push_back(slot(z0 + off + a, z0 + off + b));
      off += q;
    }
    signs_ = Eigen::VectorXd::Constant(dim, -1.0);
    signs_.head(n_).setOnes();
    ldl_.analyze(k_);
  }

  void update(const NtScaling& w) {
    double* v = k_.valuePtr();
    std::size_t s = 0;
    for (int i = 0; i < cones_.nonneg; ++i) v[slots_[s++]] = -w.lin[i] * w.lin[i];
    for (std::size_t c = 0; c < cones_.soc.size(); ++c) {
      const Eigen::MatrixXd w2 = soc_w2(w, static_cast<int>(c));
      const int q = cones_.soc[c];
      for (int b = 0; b < q; ++b)
        for (int a = 0; a <= b; ++a) v[slots_[s++]] = -w2(a, b);
    }
  }

  void set_identity_scaling() {
    double* v = k_.valuePtr();
    std::size_t s = 0;
    for (int i = 0; i < cones_.nonneg; ++i) v[slots_[s++]] = -1.0;
    for (int q : cones_.soc)
      for (int b = 0; b < q; ++b)
        for (int a = 0; a <= b; ++a) v[slots_[s++]] = a == b ? -1.0 : 0.0;
  }

  void factorize() { ldl_.factorize(k_, signs_, kStaticReg, kDynamicEps, kDynamicDelta); }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = ldl_.solve(rhs);
    const double tol = kRefineTol * (1.0 + inf_norm(rhs));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kRefineSteps; ++k) {
      const Eigen::VectorXd r = rhs - k_.selfadjointView<Eigen::Upper>() * x;
      const double err = inf_norm(r);
      if (err <= tol || err > 0.5 * prev) break;
      prev = err;
      x += ldl_.solve(r);
    }
    return x;
  }

 private:
  Eigen::Index n_, p_, m_;
  ConeSpec cones_;
  SpMat k_;
  std::vector<int> slots_;
  Eigen::VectorXd signs_;
  SparseLdl ldl_;
};

// s ↦ s + (1 + α)e when s is not strictly inside the cone.
Eigen::VectorXd bring_to_cone(const ConeSpec& k, const Eigen::VectorXd& r) {
  const double alpha = -min_cone_eigenvalue(k, r);
  if (alpha < 0.0) return r;
  return r + (1.0 + alpha) * identity_element(k);
}

struct Iterate {
  Eigen::VectorXd x, y, z, s;
  double tau = 1.0, kappa = 1.0;
};

struct Stats {
  double pres = 0, dres = 0, pcost = 0, dcost = 0, gap = 0, relgap = 0;
  double pinf = std::numeric_limits<double>::infinity();
  double dinf = std::numeric_limits<double>::infinity();
  double merit = std::numeric_limits<double>::infinity();
  bool finite = true;
};

}  // namespace

IpmResult solve_cone_program(const ConeProgram& original, const Params& prm) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  ConeProgram p = original;
  const Equilibration eq = equilibrate(p, prm.equilibrate);
  const ConeSpec& k = p.cones;
  const auto n = p.c.size();
  const auto np = p.b.size();
  const auto m = p.h.size();

  const double bnorm = 1.0 + inf_norm(original.b);
  const double hnorm = 1.0 + inf_norm(original.h);
  const double cnorm = 1.0 + inf_norm(original.c);

  Kkt kkt(p);
  auto stack = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    Eigen::VectorXd v(n + np + m);
    v << a, b, c;
    return v;
  };

  // Initial point from two least-squares-like solves with W = I.
  kkt.set_identity_scaling();
  kkt.factorize();
  Iterate it;
  {
    const Eigen::VectorXd sol = kkt.solve(stack(Eigen::VectorXd::Zero(n), p.b, p.h));
    it.x = sol.head(n);
    it.s = bring_to_cone(k, -sol.tail(m));
  }
  {
    const Eigen::VectorXd sol = kkt.solve(stack(-p.c, Eigen::VectorXd::Zero(np), Eigen::VectorXd::Zero(m)));
    it.y = sol.segment(n, np);
    it.z = bring_to_cone(k, sol.tail(m));
  }

  auto evaluate = [&](const Iterate& v) {
    Stats st;
    const Eigen::VectorXd xu = v.x.cwiseProduct(eq.col);
    const Eigen::VectorXd yu = v.y.cwiseProduct(eq.row_a);
    const Eigen::VectorXd zu = v.z.cwiseProduct(eq.row_g);
    const Eigen::VectorXd su = v.s.cwiseQuotient(eq.row_g);
    const Eigen::VectorXd ax = original.a * xu;
    const Eigen::VectorXd gxs = original.g * xu + su;
    const Eigen::VectorXd aty = original.a.transpose() * yu + original.g.transpose() * zu;
    st.pres = std::max(inf_norm(ax - original.b * v.tau) / bnorm,
                       inf_norm(gxs - original.h * v.tau) / hnorm) / v.tau;
    st.dres = inf_norm(aty + original.c * v.tau) / cnorm / v.tau;
    const double cx = original.c.dot(xu);
    const double by_hz = original.b.dot(yu) + original.h.dot(zu);
    st.pcost = cx / v.tau;
    st.dcost = -by_hz / v.tau;
    st.gap = v.s.dot(v.z) / (v.tau * v.tau);
    st.relgap = st.gap / std::max(1e-300, std::min(std::abs(st.pcost), std::abs(st.dcost)));
    if (by_hz < 0.0) st.pinf = inf_norm(aty) / cnorm / (-by_hz);
    if (cx < 0.0) st.dinf = std::max(inf_norm(ax) / bnorm, inf_norm(gxs) / hnorm) / (-cx);
    st.finite = std::isfinite(st.pres) && std::isfinite(st.dres) && std::isfinite(st.gap) &&
                std::isfinite(st.pcost) && std::isfinite(st.dcost);
    st.merit = std::max({st.pres, st.dres, std::min(st.gap, st.relgap)});
    return st;
  };

  IpmResult res;
  auto finish = [&](const Iterate& v, const Stats& st, IpmStatus status, bool reduced) {
    res.status = status;
    res.reduced_accuracy = reduced;
    const double scale = status == IpmStatus::Optimal ? v.tau : 1.0;
    res.x = v.x.cwiseProduct(eq.col) / scale;
    res.y = v.y.cwiseProduct(eq.row_a) / scale;
    res.z = v.z.cwiseProduct(eq.row_g) / scale;
    res.s = v.s.cwiseQuotient(eq.row_g) / scale;
    res.pres = st.pres;
    res.dres = st.dres;
    res.gap = st.gap;
    res.pcost = st.pcost;
    res.dcost = st.dcost;
    return res;
  };

  auto converged = [&](const Stats& st, double feas, double gap) {
    return st.pres <= feas && st.dres <= feas && (st.gap <= gap || st.relgap <= gap);
  };

  Iterate best = it;
  Stats best_stats;
  NtScaling w;
  const int degree = k.degree();
  const Eigen::VectorXd e = identity_element(k);
  IpmStatus stop = IpmStatus::MaxIters;

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    const Stats st = evaluate(it);
    if (!st.finite) {
      stop = IpmStatus::Stalled;
      break;
    }
    if (prm.verbose)
      std::fprintf(stderr, "%3d pcost=% .9e dcost=% .9e gap=%.2e pres=%.2e dres=%.2e k/t=%.2e\n",
                   iter, st.pcost, st.dcost, st.gap, st.pres, st.dres, it.kappa / it.tau);
    if (st.merit < best_stats.merit && it.kappa < it.tau) {
      best = it;
      best_stats = st;
    }
    if (converged(st, prm.feas_tol, std::max(prm.abs_gap_tol, 0.0)) &&
        (st.gap <= prm.abs_gap_tol || st.relgap <= prm.rel_gap_tol))
      return finish(it, st, IpmStatus::Optimal, false);
    if (it.kappa > it.tau) {
      if (st.pinf <= prm.feas_tol) return finish(it, st, IpmStatus::PrimalInfeasible, false);
      if (st.dinf <= prm.feas_tol) return finish(it, st, IpmStatus::DualInfeasible, false);
    }
    if (iter >= prm.max_iters) {
      stop = IpmStatus::MaxIters;
      break;
    }
    if (std::chrono::duration<double>(Clock::now() - start).count() > prm.time_limit_s) {
      stop = IpmStatus::TimeLimit;
      break;
    }

    if (!compute_scaling(k, it.s, it.z, w)) {
      stop = IpmStatus::Stalled;
      break;
    }
    kkt.update(w);
    kkt.factorize();

    const Eigen::VectorXd r1 = p.a.transpose() * it.y + p.g.transpose() * it.z + p.c * it.tau;
    const Eigen::VectorXd ry = p.a * it.x - p.b * it.tau;
    const Eigen::VectorXd r3 = it.s + p.g * it.x - p.h * it.tau;
    const double r4 = it.kappa + p.c.dot(it.x) + p.b.dot(it.y) + p.h.dot(it.z);
    const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (degree + 1);

    const Eigen::VectorXd d1 = kkt.solve(stack(-p.c, p.b, p.h));
    const double denom =
        p.c.dot(d1.head(n)) + p.b.dot(d1.segment(n, np)) + p.h.dot(d1.tail(m)) - it.kappa / it.tau;

    // Solves for one direction given the residual weight and complementarity targets.
    struct Direction {
      Eigen::VectorXd dx, dy, dz, ds;
      double dtau, dkappa;
    };
    auto direction = [&](double eta, const Eigen::VectorXd& rc, double rk) {
      const Eigen::VectorXd lrc = cone_division(k, w.lambda, rc);
      const Eigen::VectorXd d2 = kkt.solve(stack(-eta * r1, -eta * ry, -eta * r3 - apply_w(k, w, lrc)));
      const double num = -eta * r4 - (p.c.dot(d2.head(n)) + p.b.dot(d2.segment(n, np)) +
                                      p.h.dot(d2.tail(m))) - rk / it.tau;
      Direction d;
      d.dtau = num / denom;
      const Eigen::VectorXd full = d2 + d.dtau * d1;
      d.dx = full.head(n);
      d.dy = full.segment(n, np);
      d.dz = full.tail(m);
      d.ds = apply_w(k, w, lrc - apply_w(k, w, d.dz));
      d.dkappa = (rk - it.kappa * d.dtau) / it.tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double a = std::min(max_step(k, it.s, d.ds), max_step(k, it.z, d.dz));
      if (d.dtau < 0.0) a = std::min(a, -it.tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -it.kappa / d.dkappa);
      return a;
    };

    const Eigen::VectorXd ll = cone_product(k, w.lambda, w.lambda);
    const Direction aff = direction(1.0, -ll, -it.tau * it.kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    const Eigen::VectorXd corr =
        cone_product(k, apply_winv(k, w, aff.ds), apply_w(k, w, aff.dz));
    const Eigen::VectorXd rc = -ll - corr + sigma * mu * e;
    const double rk = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction cmb = direction(1.0 - sigma, rc, rk);
    const double alpha = std::min(1.0, kStepFraction * step_length(cmb));
    if (!(alpha > kMinStep)) {
      stop = IpmStatus::Stalled;
      break;
    }
    it.x += alpha * cmb.dx;
    it.y += alpha * cmb.dy;
    it.z += alpha * cmb.dz;
    it.s += alpha * cmb.ds;
    it.tau += alpha * cmb.dtau;
    it.kappa += alpha * cmb.dkappa;
  }

  // No clean exit: accept the best iterate at reduced accuracy if it qualifies.
  if (std::isfinite(best_stats.merit) && converged(best_stats, prm.reduced_feas_tol, prm.reduced_gap_tol))
    return finish(best, best_stats, IpmStatus::Optimal, true);
  const Stats st = evaluate(it);
  if (it.kappa > it.tau) {
    if (st.pinf <= prm.reduced_feas_tol) return finish(it, st, IpmStatus::PrimalInfeasible, true);
    if (st.dinf <= prm.reduced_feas_tol) return finish(it, st, IpmStatus::DualInfeasible, true);
  }
  return finish(it, st, stop, false);
}

}  // namespace conecg::conic::detail
