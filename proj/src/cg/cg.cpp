#include "conecg/cg.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace conecg {

void SdpProblem::validate() const {
  const auto n = c.size();
  if (n < 1) throw CgError("SdpProblem: empty matrix C");
  if (b.size() != m()) throw CgError("SdpProblem: b has the wrong length");
  for (const auto& ai : a)
    if (ai.size() != n) throw CgError("SdpProblem: Aᵢ dimension differs from C");
  if (!b.allFinite()) throw CgError("SdpProblem: non-finite b");
}

namespace {

Eigen::MatrixXd read_block(std::istream& in, int n, const char* what) {
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> d(i, j))) throw CgError(std::string("read_sdp: truncated ") + what);
  return d;
}

void write_block(std::ostream& out, const SymMatrixd& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < a.size(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string status_label(const MasterResult& r) {
  std::string s = conic::to_string(r.status);
  if (r.optimal() && r.reduced_accuracy) s += "~";
  return s;
}

}  // namespace

SdpProblem read_sdp(std::istream& in) {
  int m = 0, n = 0;
  if (!(in >> m >> n) || m < 0 || n < 1) throw CgError("read_sdp: bad header, expected \"m n\"");
  SdpProblem p;
  try {
    p.c = SymMatrixd::Symmetrized(read_block(in, n, "C"));
    p.b.resize(m);
    for (int i = 0; i < m; ++i) {
      if (!(in >> p.b[i])) throw CgError("read_sdp: missing b_" + std::to_string(i + 1));
      p.a.push_back(SymMatrixd::Symmetrized(read_block(in, n, "A block")));
    }
  } catch (const std::invalid_argument& e) {
    throw CgError(std::string("read_sdp: ") + e.what());
  }
  p.validate();
  return p;
}

void write_sdp(std::ostream& out, const SdpProblem& p) {
  const auto prec = out.precision(17);
  out << p.m() << ' ' << p.n() << '\n';
  write_block(out, p.c);
  for (int i = 0; i < p.m(); ++i) {
    out << p.b[i] << '\n';
    write_block(out, p.a[i]);
  }
  out.precision(prec);
}

MatrixProgram to_matrix_program(const SdpProblem& p) {
  p.validate();
  const int n = p.n();
  MatrixProgram prog;
  prog.n = n;
  prog.sense = conic::Sense::Maximize;
  const int rows = n * (n + 1) / 2;
  prog.rhs.resize(rows);
  prog.entries.resize(rows);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int r = MatrixProgram::upper_index(n, i, j);
      prog.rhs[r] = p.c(i, j);
      prog.entries[r].push_back({r, 1.0});
    }
  for (int k = 0; k < p.m(); ++k) {
    MatrixProgram::Aux y;
    y.cost = p.b[k];
    y.name = "y" + std::to_string(k + 1);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (p.a[k](i, j) != 0.0) y.column.push_back({MatrixProgram::upper_index(n, i, j), p.a[k](i, j)});
    prog.aux.push_back(std::move(y));
  }
  return prog;
}

MasterResult solve_master(const MatrixProgram& prog, const AtomSet& atoms, const conic::Params& params) {
  const int n = prog.n;
  if (static_cast<int>(prog.entries.size()) != n * (n + 1) / 2)
    throw CgError("solve_master: entry map has the wrong size");
  conic::Model model;
  model.set_sense(prog.sense);
  std::vector<conic::LinearExpr> rows(prog.num_rows());

  std::vector<int> aux_var;
  for (const auto& a : prog.aux) {
    const int v = model.add_variable(a.lower, a.cost, a.name);
    aux_var.push_back(v);
    for (const auto& c : a.column) rows.at(c.row).push_back({v, c.value});
  }
  auto put = [&](int var, int p, int q, double value) {
    if (value == 0.0) return;
    for (const auto& c : prog.entries[MatrixProgram::upper_index(n, p, q)])
      rows[c.row].push_back({var, c.value * value});
  };
  auto put_outer = [&](int var, const Eigen::VectorXd& u) {
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) put(var, p, q, u[p] * u[q]);
  };

  std::vector<std::array<int, 3>> atom_var;
  for (const auto& atom : atoms) {
    if (atom_dim(atom) != n) throw CgError("solve_master: atom dimension mismatch");
    if (const auto* r = std::get_if<RankOneAtom>(&atom)) {
      const int v = model.add_variable(0.0);
      atom_var.push_back({v, -1, -1});
      if (r->is_structured()) {
        const auto& e = r->entries();
        for (std::size_t a = 0; a < e.size(); ++a) {
          put(v, e[a].index, e[a].index, 1.0);
          for (std::size_t b = a + 1; b < e.size(); ++b) put(v, e[a].index, e[b].index, e[a].sign * e[b].sign);
        }
      } else {
        const Eigen::VectorXd u = r->vector();
        put_outer(v, u);
      }
    } else {
      const auto& pa = std::get<PairAtom>(atom);
      const int v1 = model.add_variable();
      const int v2 = model.add_variable();
      const int v3 = model.add_variable();
      model.add_psd2(v1, v2, v3);
      atom_var.push_back({v1, v2, v3});
      if (pa.is_structured()) {
        put(v1, pa.first(), pa.first(), 1.0);
        put(v2, pa.first(), pa.second(), 1.0);
        put(v3, pa.second(), pa.second(), 1.0);
      } else {
        const PairAtom::Basis vb = pa.basis();
        const Eigen::VectorXd c0 = vb.col(0), c1 = vb.col(1);
        put_outer(v1, c0);
        // v1 v2ᵀ + v2 v1ᵀ
        for (int p = 0; p < n; ++p)
          for (int q = p; q < n; ++q) put(v2, p, q, c0[p] * c1[q] + c1[p] * c0[q]);
        put_outer(v3, c1);
      }
    }
  }
  for (int r = 0; r < prog.num_rows(); ++r) model.add_equality(std::move(rows[r]), prog.rhs[r]);

  const conic::Solution sol = conic::solve(model, params);
  MasterResult res;
  res.status = sol.status;
  res.reduced_accuracy = sol.reduced_accuracy;
  res.solver_iterations = sol.iterations;
  if (!sol.optimal()) return res;

  res.bound = sol.objective;
  res.mu = sol.dual_eq;
  res.aux.resize(static_cast<Eigen::Index>(aux_var.size()));
  for (std::size_t k = 0; k < aux_var.size(); ++k) res.aux[k] = sol.primal[aux_var[k]];
  res.gram = SymMatrixd(n);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& av = atom_var[k];
    Eigen::Vector3d w = Eigen::Vector3d::Zero();
    if (av[1] < 0) {
      w[0] = sol.primal[av[0]];
      const auto& r = std::get<RankOneAtom>(atoms[k]);
      if (r.is_structured()) {
        const auto& e = r.entries();
        for (std::size_t a = 0; a < e.size(); ++a) {
          res.gram.add(e[a].index, e[a].index, w[0]);
          for (std::size_t b = a + 1; b < e.size(); ++b) res.gram.add(e[a].index, e[b].index, w[0] * e[a].sign * e[b].sign);
        }
      } else {
        res.gram += w[0] * r.outer();
      }
    } else {
      w << sol.primal[av[0]], sol.primal[av[1]], sol.primal[av[2]];
      const auto& pa = std::get<PairAtom>(atoms[k]);
      if (pa.is_structured()) {
        res.gram.add(pa.first(), pa.first(), w[0]);
        res.gram.add(pa.first(), pa.second(), w[1]);
        res.gram.add(pa.second(), pa.second(), w[2]);
      } else {
        const PairAtom::Basis vb = pa.basis();
        Eigen::Matrix2d blk;
        blk << w[0], w[1], w[1], w[2];
        res.gram += SymMatrixd::Symmetrized(vb * blk * vb.transpose());
      }
    }
    res.atom.push_back(w);
  }
  return res;
}

MasterResult solve_master_lp(const SdpProblem& prob, const AtomSet& atoms, const conic::Params& params) {
  for (const auto& a : atoms)
    if (!std::holds_alternative<RankOneAtom>(a)) throw CgError("solve_master_lp: pair atom in an LP master");
  return solve_master(to_matrix_program(prob), atoms, params);
}

MasterResult solve_master_socp(const SdpProblem& prob, const AtomSet& atoms, const conic::Params& params) {
  return solve_master(to_matrix_program(prob), atoms, params);
}

SymMatrixd assemble_dual_matrix(const MatrixProgram& prog, const Eigen::VectorXd& mu) {
  if (mu.size() != prog.num_rows()) throw CgError("assemble_dual_matrix: multiplier length mismatch");
  const int n = prog.n;
  SymMatrixd x(n);
  const double sgn = prog.sense == conic::Sense::Maximize ? 1.0 : -1.0;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      double s = 0;
      for (const auto& c : prog.entries[MatrixProgram::upper_index(n, p, q)]) s += mu[c.row] * c.value;
      x.set(p, q, sgn * (p == q ? s : 0.5 * s));
    }
  return x;
}

std::vector<Atom> price_eig(const SymMatrixd& x, CgMode mode, int k, double psd_tol) {
  if (k < 1) throw CgError("price_eig: cut count must be positive");
  const auto eig = eigh(x);
  const double thr = psd_tol * std::max(1.0, x.norm());
  int neg = 0;
  while (neg < eig.eigenvalues.size() && eig.eigenvalues[neg] < -thr) ++neg;
  std::vector<Atom> out;
  if (mode == CgMode::LP) {
    for (int i = 0; i < std::min(k, neg); ++i) out.push_back(RankOneAtom::dense(eig.eigenvectors.col(i)));
    return out;
  }
  int i = 0;
  while (static_cast<int>(out.size()) < k && i + 1 < neg) {
    PairAtom::Basis v(x.size(), 2);
    v.col(0) = eig.eigenvectors.col(i);
    v.col(1) = eig.eigenvectors.col(i + 1);
    out.push_back(PairAtom::dense(v));
    i += 2;
  }
  if (static_cast<int>(out.size()) < k && i < neg) out.push_back(RankOneAtom::dense(eig.eigenvectors.col(i)));
  return out;
}

std::string to_string(CgTermination t) {
  switch (t) {
    case CgTermination::Converged: return "converged";
    case CgTermination::Stalled: return "stalled";
    case CgTermination::MaxIters: return "max_iters";
    case CgTermination::TimeLimit: return "time_limit";
    case CgTermination::SolverFailure: return "solver_failure";
    case CgTermination::NoNewAtoms: return "no_new_atoms";
  }
  return "unknown";
}

Pricer eig_pricer(const CgConfig& cfg) {
  return [cfg](const MatrixProgram& prog, const MasterResult& master, const AtomSet&) {
    PricingOutput out;
    const SymMatrixd x = assemble_dual_matrix(prog, master.mu);
    out.atoms = price_eig(x, cfg.mode, cfg.cuts_per_iter, cfg.psd_tol);
    out.converged = out.atoms.empty();
    return out;
  };
}

CgTrace run_matrix_cg(MatrixProgram prog, AtomSet initial, const CgConfig& cfg, const Pricer& pricer) {
  if (cfg.cuts_per_iter < 1 || cfg.max_iters < 0 || !(cfg.psd_tol >= 0) || !(cfg.time_limit_s > 0))
    throw CgError("run: invalid configuration");
  const auto t0 = Clock::now();
  CgTrace trace;
  trace.sense = prog.sense;
  trace.atoms = std::move(initial);
  const double sgn = prog.sense == conic::Sense::Maximize ? 1.0 : -1.0;

  auto params_now = [&]() {
    conic::Params p = cfg.solver;
    p.time_limit_s = std::min(p.time_limit_s, cfg.time_limit_s - ms_since(t0) / 1000.0);
    return p;
  };

  MasterResult master = solve_master(prog, trace.atoms, params_now());
  if (!master.optimal())
    throw CgError("initial master ended with status " + conic::to_string(master.status) +
                  "; the initial atoms must make the restricted problem feasible and bounded");
  trace.records.push_back({0, master.bound, static_cast<int>(trace.atoms.size()), status_label(master), ms_since(t0)});

  int stall = 0;
  trace.termination = CgTermination::MaxIters;
  bool stopped = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (ms_since(t0) / 1000.0 >= cfg.time_limit_s) {
      trace.termination = CgTermination::TimeLimit;
      stopped = true;
      break;
    }
    PricingOutput po = pricer(prog, master, trace.atoms);
    if (po.converged) {
      trace.termination = CgTermination::Converged;
      stopped = true;
      break;
    }
    int added = 0;
    for (const auto& a : po.atoms) added += trace.atoms.add(a) ? 1 : 0;
    for (auto& c : po.columns) {
      prog.aux.push_back(std::move(c));
      ++added;
    }
    if (added == 0) {
      trace.termination = CgTermination::NoNewAtoms;
      stopped = true;
      break;
    }
    MasterResult next = solve_master(prog, trace.atoms, params_now());
    if (!next.optimal()) {
      trace.termination = ms_since(t0) / 1000.0 >= cfg.time_limit_s ? CgTermination::TimeLimit
                                                                     : CgTermination::SolverFailure;
      stopped = true;
      break;
    }
    const double gain = sgn * (next.bound - master.bound);
    master = std::move(next);
    trace.records.push_back({it, master.bound, added, status_label(master), ms_since(t0)});
    stall = gain < cfg.improvement_tol * std::max(1.0, std::abs(master.bound)) ? stall + 1 : 0;
    if (stall >= cfg.stall_iters) {
      trace.termination = CgTermination::Stalled;
      stopped = true;
      break;
    }
  }
  if (!stopped && pricer(prog, master, trace.atoms).converged) trace.termination = CgTermination::Converged;
  trace.final_master = std::move(master);
  return trace;
}

CgTrace run(const SdpProblem& prob, const CgConfig& cfg) {
  MatrixProgram prog = to_matrix_program(prob);
  AtomSet init = cfg.mode == CgMode::SOCP && prob.n() >= 2 ? gen_V2(prob.n()) : gen_U2(prob.n());
  CgTrace trace = run_matrix_cg(std::move(prog), std::move(init), cfg, eig_pricer(cfg));

  const auto& fm = trace.final_master;
  SymMatrixd slack = prob.c;
  for (int i = 0; i < prob.m(); ++i) slack -= fm.aux[i] * prob.a[i];
  CgCertificate& cert = trace.certificate;
  cert.checked = true;
  cert.residual = (slack - fm.gram).norm();
  cert.min_eig = min_eigenvalue(fm.gram);
  cert.valid = cert.residual <= 1e-6 * std::max(1.0, prob.c.norm()) && is_psd(fm.gram, 1e-7);
  return trace;
}

void write_trace_csv(std::ostream& out, const CgTrace& trace, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "iter,bound,atoms_added,status,elapsed_ms\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%s,%.3f\n", r.iter, r.bound, r.atoms_added, r.status.c_str(),
                  r.elapsed_ms);
    out << buf;
  }
}

}  // namespace conecg
