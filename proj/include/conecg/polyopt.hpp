#pragma once

#include "conecg/atoms.hpp"
#include "conecg/cg.hpp"
#include "conecg/symmat.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace conecg {

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Exponent = std::vector<int>;

/// All exponent tuples of n variables with total degree d, in graded
/// lexicographic order with larger leading exponents first:
/// (2,2) → x₁², x₁x₂, x₂².
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int n, int d);

  int num_vars() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const Exponent& operator[](int i) const { return exps_[i]; }
  const std::vector<Exponent>& exponents() const { return exps_; }
  /// Position of `e`, or −1.
  int index(const Exponent& e) const;

 private:
  int n_ = 0, d_ = 0;
  std::vector<Exponent> exps_;
  std::map<Exponent, int> pos_;
};

MonomialBasis monomials(int n, int d);
/// Shared immutable basis for (n, d); thread-safe.
const MonomialBasis& cached_basis(int n, int d);

/// C(n+d−1, d).
std::uint64_t basis_size(int n, int d);

/// Homogeneous polynomial (form) of the given degree; coefficients follow
/// monomials(n, degree).
struct Poly {
  int n = 0;
  int degree = 0;
  Eigen::VectorXd coef;

  static Poly zero(int n, int degree);
  /// Builds a form from (exponent, coefficient) terms; repeated exponents add.
  static Poly from_terms(int n, const std::vector<std::pair<Exponent, double>>& terms);

  double eval(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// True if every monomial with a nonzero coefficient has only even exponents.
  bool is_even() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(double s, const Poly& a);
Poly multiply(const Poly& a, const Poly& b);

/// (Σ xᵢ²)^d, a form of degree 2d.
Poly sphere_multiplier(int n, int d);

/// The Motzkin form x⁴y² + x²y⁴ − 3x²y²z² + z⁶.
Poly motzkin();

/// Text format: header "n deg", then one "e₁ … e_n c" line per term.
Poly read_poly(std::istream& in);
void write_poly(std::ostream& out, const Poly& p);

/// Gram map for z(x,d): the coefficient of the i-th monomial of degree 2d in
/// zᵀQz is Aᵢ·Q = Σ over positions (j,k) with z_j z_k = mᵢ of Q_jk.
struct GramMap {
  struct Position {
    int j, k;  // j ≤ k
  };
  int n = 0, d = 0;
  MonomialBasis half;  // degree d
  MonomialBasis full;  // degree 2d
  std::vector<std::vector<Position>> positions;  // per full-basis monomial, j ≤ k
  std::vector<int> monomial;                      // per upper_index(j,k)

  /// Coefficients of zᵀQz.
  Eigen::VectorXd apply(const SymMatrixd& q) const;
};

GramMap gram_map(int n, int d);

/// max λ  s.t.  target − λ·lambda_poly = zᵀQz with Q in the cone generated by
/// the atoms (rows are the coefficients of the degree-2d monomials).
MatrixProgram gram_program(const Poly& target, const Poly& lambda_poly, const GramMap& map);

struct BoundOptions {
  /// Largest Gram basis accepted by the r-hierarchy bounds.
  int gram_cap = 400;
  /// For forms that are even in every variable, keep only atoms coupling
  /// monomials of equal exponent parity. Sign symmetry makes this exact.
  bool exploit_symmetry = true;
  conic::Params solver;
};

struct BoundResult {
  double lambda = 0;
  conic::Status status = conic::Status::NumericalFailure;
  int gram_size = 0;
  std::size_t num_atoms = 0;
  MasterResult master;
};

/// max λ with target − λ·lambda_poly dsos (LP) or sdsos (SOCP).
BoundResult form_bound(const Poly& target, const Poly& lambda_poly, CgMode mode, const BoundOptions& opts = {});

BoundResult dsos_bound(const Poly& p, const BoundOptions& opts = {});
BoundResult sdsos_bound(const Poly& p, const BoundOptions& opts = {});
/// max λ with (p − λ(Σxᵢ²)^d)(Σxᵢ²)^r dsos / sdsos. Throws PolyError when
/// the Gram basis exceeds opts.gram_cap.
BoundResult r_dsos_bound(const Poly& p, int r, const BoundOptions& opts = {});
BoundResult r_sdsos_bound(const Poly& p, int r, const BoundOptions& opts = {});

struct TriplesResult {
  std::vector<RankOneAtom> atoms;   // most violated first
  std::size_t violations = 0;       // violators collected (≤ t1)
  std::uint64_t scanned = 0;
  bool full_cycle = false;          // the whole cycle was scanned
};

/// Scans triples from the cursor, collecting up to t1 with uᵀBu below
/// −tol·max(1,‖B‖_F), and returns the t2 most violated (ties by cycle
/// position). The cursor ends just past the last scanned triple.
TriplesResult price_triples(const SymMatrixd& b, TripleCursor& cursor, std::size_t t1, std::size_t t2,
                            double tol = 1e-9);

enum class Pricing { Eig, Triples };

struct PolyCgConfig {
  CgConfig cg;
  Pricing pricing = Pricing::Eig;
  std::size_t t1 = 300000;
  std::size_t t2 = 5000;
  /// Adds am-gm columns found by amgm_separation at every iteration.
  bool amgm = false;
  int amgm_k = 3;
  std::uint64_t amgm_node_cap = 10000000;
};

/// Column generation for max λ with p − λ(Σxᵢ²)^d dsos (LP) / sdsos (SOCP),
/// starting from gen_U2 / gen_V2 on the Gram basis.
CgTrace cg_polymin(const Poly& p, const PolyCgConfig& cfg);

/// Pricer used by cg_polymin and cg_stableset.
Pricer make_pricer(const CgConfig& cfg, Pricing pricing, std::size_t t1, std::size_t t2);

struct AmgmResult {
  enum class Status { Found, None, Budget };
  Status status = Status::None;
  Poly q;                 // Σ x^{α_c} − k·x^{α_y}
  double objective = 0;   // μ·coef(q)
  std::vector<int> c;     // basis indices with coefficient 1
  int y = -1;             // basis index with coefficient −k
  std::uint64_t nodes = 0;
};

/// Exhaustive search for the am-gm form q = Σ_{c∈C} x^{α_c} − k·x^{α_y},
/// C a set of k distinct even monomials with Σ α_c = k·α_y and α_y ∉ C,
/// minimizing μ·coef(q). Found only when the minimum is negative.
AmgmResult amgm_separation(const Eigen::VectorXd& mu, const MonomialBasis& basis, int k,
                           std::uint64_t node_cap = 10000000);

/// Upper bound on min p over the unit sphere: best of `samples` random
/// directions (fixed seed), each of the best few refined by projected
/// gradient descent.
double sphere_min_oracle(const Poly& p, int samples, std::uint64_t seed = 1);

}  // namespace conecg
