#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conecg {

/// Dense symmetric matrix. Every mutation writes both (i,j) and (j,i), so the
/// stored matrix is exactly symmetric at all times.
template <typename Scalar>
class SymMatrix {
 public:
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  SymMatrix() = default;
  explicit SymMatrix(Index n) : m_(Dense::Zero(n, n)) {}

  static SymMatrix Zero(Index n) { return SymMatrix(n); }
  static SymMatrix Identity(Index n) {
    SymMatrix s;
    s.m_ = Dense::Identity(n, n);
    return s;
  }
  static SymMatrix Ones(Index n) {
    SymMatrix s;
    s.m_ = Dense::Ones(n, n);
    return s;
  }
  static SymMatrix Diagonal(const Vector& d) {
    SymMatrix s;
    s.m_ = d.asDiagonal();
    return s;
  }

  /// Mirrors the upper triangle of `a` into the lower one.
  template <typename Derived>
  static SymMatrix FromUpper(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
    SymMatrix s;
    s.m_ = a.template selfadjointView<Eigen::Upper>();
    s.check_finite();
    return s;
  }

  /// (A + Aᵀ) / 2.
  template <typename Derived>
  static SymMatrix Symmetrized(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
    SymMatrix s;
    s.m_ = (a + a.transpose()) / Scalar(2);
    s.check_finite();
    return s;
  }

  /// u uᵀ
  template <typename Derived>
  static SymMatrix Outer(const Eigen::MatrixBase<Derived>& u) {
    SymMatrix s;
    s.m_ = u * u.transpose();
    return s;
  }

  Index size() const { return m_.rows(); }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }
  void set(Index i, Index j, Scalar v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(Index i, Index j, Scalar v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }

  const Dense& dense() const { return m_; }
  auto diagonal() const { return m_.diagonal(); }

  /// Frobenius inner product A·B = trace(AB).
  Scalar dot(const SymMatrix& other) const { return m_.cwiseProduct(other.m_).sum(); }
  Scalar norm() const { return m_.norm(); }
  Scalar quad(const Vector& u) const { return u.dot(m_ * u); }

  SymMatrix& operator+=(const SymMatrix& o) {
    m_ += o.m_;
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    m_ -= o.m_;
    return *this;
  }
  SymMatrix& operator*=(Scalar s) {
    m_ *= s;
    return *this;
  }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, Scalar s) { return a *= s; }
  friend SymMatrix operator*(Scalar s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.m_ == b.m_; }

 private:
  void check_finite() const {
    if (!m_.allFinite()) throw std::invalid_argument("SymMatrix: non-finite entry");
  }

  Dense m_;
};

using SymMatrixd = SymMatrix<double>;

template <typename Scalar>
struct EigenDecomposition {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric eigendecomposition (Householder tridiagonalization followed by
/// implicit symmetric QL/QR sweeps, as implemented by Eigen). Eigenvalues come
/// back ascending; the result is deterministic for a fixed input.
template <typename Scalar>
EigenDecomposition<Scalar> eigh(const SymMatrix<Scalar>& a) {
  if (a.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::Dense> solver(a.dense());
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("eigh: QL iteration did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
Scalar min_eigenvalue(const SymMatrix<Scalar>& a) {
  if (a.size() == 0) return Scalar(0);
  Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::Dense> solver(a.dense(),
                                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("min_eigenvalue: QL iteration did not converge");
  return solver.eigenvalues()(0);
}

/// λ_min(A) ≥ −tol·max(1, ‖A‖_F).
template <typename Scalar>
bool is_psd(const SymMatrix<Scalar>& a, Scalar tol = Scalar(1e-8)) {
  if (tol < 0) throw std::invalid_argument("is_psd: negative tolerance");
  using std::max;
  return min_eigenvalue(a) >= -tol * max(Scalar(1), a.norm());
}

/// Exact row test a_ii ≥ Σ_{j≠i} |a_ij|; no tolerance.
template <typename Scalar>
bool is_dd(const SymMatrix<Scalar>& a) {
  using std::abs;
  const auto n = a.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar off = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) off += abs(a(i, j));
    if (a(i, i) < off) return false;
  }
  return true;
}

/// One term w·u uᵀ of a dd decomposition; u has one or two ±1 entries.
template <typename Scalar>
struct DdTerm {
  Scalar weight;
  Eigen::Index i;
  Eigen::Index j;  // == i for a single-entry vector e_i
  int sign;        // sign of the j-th entry when j != i
};

/// Writes a dd matrix as a nonnegative combination of the n² atoms
/// e_i and e_i ± e_j. Zero-weight terms are omitted.
template <typename Scalar>
std::vector<DdTerm<Scalar>> dd_decompose(const SymMatrix<Scalar>& a) {
  using std::abs;
  if (!is_dd(a)) throw std::invalid_argument("dd_decompose: matrix is not diagonally dominant");
  const auto n = a.size();
  std::vector<DdTerm<Scalar>> terms;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar v = a(i, j);
      if (v != 0) terms.push_back({abs(v), i, j, v > 0 ? 1 : -1});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar slack = a(i, i);
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) slack -= abs(a(i, j));
    if (slack != 0) terms.push_back({slack, i, i, 1});
  }
  return terms;
}

template <typename Scalar>
SymMatrix<Scalar> reconstruct(const std::vector<DdTerm<Scalar>>& terms, Eigen::Index n) {
  SymMatrix<Scalar> m(n);
  for (const auto& t : terms) {
    m.add(t.i, t.i, t.weight);
    if (t.j != t.i) {
      m.add(t.j, t.j, t.weight);
      m.add(t.i, t.j, t.weight * t.sign);
    }
  }
  return m;
}

struct SddOptions {
  double tol = 1e-8;  // relative to max(1, ‖A‖_F)
};

struct SddResult {
  bool member = false;
  double margin = 0;  // largest t with A − tI scaled diagonally dominant
};

/// Membership in the scaled diagonally dominant cone, decided by the SOCP
///   max t  s.t.  A − tI = Σ_{i<j} M^{ij},  each 2×2 block of M^{ij} psd.
/// Throws ConicError when the solver does not reach an optimal status.
SddResult sdd_margin(const SymMatrixd& a, const SddOptions& opts = {});
bool is_sdd(const SymMatrixd& a, const SddOptions& opts = {});

/// Text format: "n" then n rows of n numbers. The result is (A + Aᵀ)/2.
SymMatrixd read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const SymMatrixd& a);

}  // namespace conecg
