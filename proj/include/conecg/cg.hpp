#pragma once

#include "conecg/atoms.hpp"
#include "conecg/conic.hpp"
#include "conecg/symmat.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conecg {

class CgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// max bᵀy  s.t.  C − Σ yᵢAᵢ ⪰ 0
struct SdpProblem {
  SymMatrixd c;
  std::vector<SymMatrixd> a;
  Eigen::VectorXd b;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(a.size()); }
  void validate() const;
};

/// Text format: "m n", then C (n rows of n numbers), then for each i the
/// scalar bᵢ followed by Aᵢ. Matrices are symmetrized on load.
SdpProblem read_sdp(std::istream& in);
void write_sdp(std::ostream& out, const SdpProblem& p);

/// Linear program over a matrix M restricted to a cone of atoms:
///   rows r:  Σ_{p≤q} coef(p,q → r)·M_pq + Σ_k aux_k·col_k(r) = rhs_r,
///   M = Σ (atom weight)·(atom matrix),
/// optimizing Σ cost_k·aux_k. Atom weights are ≥ 0 for rank-one atoms and
/// form a psd 2×2 block for pair atoms.
struct MatrixProgram {
  struct Coef {
    int row;
    double value;
  };
  struct Aux {
    std::vector<Coef> column;
    double cost = 0;
    std::optional<double> lower;
    std::string name;
  };

  int n = 0;
  conic::Sense sense = conic::Sense::Maximize;
  Eigen::VectorXd rhs;
  std::vector<std::vector<Coef>> entries;  // indexed by upper_index(n, p, q)
  std::vector<Aux> aux;

  static int upper_index(int n, int p, int q) {
    if (p > q) std::swap(p, q);
    return p * n - p * (p - 1) / 2 + (q - p);
  }
  int num_rows() const { return static_cast<int>(rhs.size()); }
};

/// Rows (p,q), p ≤ q, in upper_index order; aux k is yₖ with cost bₖ.
MatrixProgram to_matrix_program(const SdpProblem& p);

struct MasterResult {
  conic::Status status = conic::Status::NumericalFailure;
  bool reduced_accuracy = false;
  double bound = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd aux;                 // values of the auxiliary variables
  std::vector<Eigen::Vector3d> atom;   // weight in [0] for rank-one atoms; (a1,a2,a3) for pairs
  Eigen::VectorXd mu;                  // row multipliers (sensitivity of the bound to rhs)
  SymMatrixd gram;                     // M = Σ weighted atoms
  int solver_iterations = 0;

  bool optimal() const { return status == conic::Status::Optimal; }
};

/// Builds the restricted master over `atoms` from scratch and solves it.
MasterResult solve_master(const MatrixProgram& prog, const AtomSet& atoms,
                          const conic::Params& params = {});
/// Restricted masters of an SDP over rank-one atoms (LP) or pair atoms (SOCP).
MasterResult solve_master_lp(const SdpProblem& prob, const AtomSet& atoms,
                             const conic::Params& params = {});
MasterResult solve_master_socp(const SdpProblem& prob, const AtomSet& atoms,
                               const conic::Params& params = {});

/// X with X_pp = Σᵣ μᵣ coef(pp→r) and X_pq = ½ Σᵣ μᵣ coef(pq→r), negated for
/// minimization masters. Then X·B ≥ 0 for every atom B of an optimal master,
/// and for an SdpProblem Aᵢ·X = bᵢ.
SymMatrixd assemble_dual_matrix(const MatrixProgram& prog, const Eigen::VectorXd& mu);

enum class CgMode { LP, SOCP };

/// New atoms from the negative eigenvalues of X (λ < −psd_tol·max(1,‖X‖_F)),
/// most negative first. LP mode: up to k rank-one atoms. SOCP mode: up to k
/// pair atoms from consecutive eigenvector pairs; a lone remaining negative
/// eigenvector becomes a rank-one atom. Empty when X is psd.
std::vector<Atom> price_eig(const SymMatrixd& x, CgMode mode, int k, double psd_tol = 1e-8);

struct CgConfig {
  CgMode mode = CgMode::LP;
  int cuts_per_iter = 1;
  int max_iters = 20;
  double time_limit_s = std::numeric_limits<double>::infinity();
  double psd_tol = 1e-8;
  /// The run stops once `stall_iters` consecutive iterations each improve the
  /// bound by less than improvement_tol·max(1,|bound|).
  double improvement_tol = 1e-9;
  int stall_iters = 5;
  conic::Params solver;
};

enum class CgTermination { Converged, Stalled, MaxIters, TimeLimit, SolverFailure, NoNewAtoms };
std::string to_string(CgTermination t);

struct CgRecord {
  int iter = 0;
  double bound = 0;
  int atoms_added = 0;
  std::string status;  // master solve status ("Optimal", "Optimal~" at reduced accuracy, ...)
  double elapsed_ms = 0;
};

struct CgCertificate {
  bool checked = false;
  double residual = 0;     // ‖(C − Σ yᵢAᵢ) − M‖_F
  double min_eig = 0;      // λ_min(M)
  bool valid = false;      // residual ≤ 1e-6·max(1,‖C‖_F) and M psd within 1e-7
};

struct CgTrace {
  conic::Sense sense = conic::Sense::Maximize;
  std::vector<CgRecord> records;
  CgTermination termination = CgTermination::MaxIters;
  MasterResult final_master;
  AtomSet atoms;
  CgCertificate certificate;

  double final_bound() const { return records.empty() ? std::numeric_limits<double>::quiet_NaN() : records.back().bound; }
  bool converged() const { return termination == CgTermination::Converged; }
};

/// Pricing hook: given the latest optimal master, returns new atoms and new
/// auxiliary columns. Returning nothing means the dual is feasible for the
/// full cone being approximated.
struct PricingOutput {
  std::vector<Atom> atoms;
  std::vector<MatrixProgram::Aux> columns;
  bool converged = false;  // set when the dual is certified feasible
};
using Pricer = std::function<PricingOutput(const MatrixProgram&, const MasterResult&, const AtomSet&)>;

/// Eigenvector pricing with the config's mode, cut count and tolerance.
Pricer eig_pricer(const CgConfig& cfg);

/// Column generation on a generic program starting from `initial` atoms.
/// Throws CgError if the initial master is not optimal.
CgTrace run_matrix_cg(MatrixProgram prog, AtomSet initial, const CgConfig& cfg, const Pricer& pricer);

/// Column generation for an SDP from gen_U2 (LP) or gen_V2 (SOCP), with the
/// final certificate filled in.
CgTrace run(const SdpProblem& prob, const CgConfig& cfg);

/// CSV with header iter,bound,atoms_added,status,elapsed_ms. Lines in
/// `comments` are written first, each prefixed with "# ".
void write_trace_csv(std::ostream& out, const CgTrace& trace, const std::vector<std::string>& comments = {});

}  // namespace conecg
