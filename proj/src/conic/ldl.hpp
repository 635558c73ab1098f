#pragma once

#include <Eigen/Sparse>

#include <vector>

namespace conecg::conic::detail {

/// Sparse LDLᵀ for symmetric quasi-definite matrices (up-looking, no pivoting)
/// with an AMD fill-reducing permutation. Each pivot has an expected sign;
/// a pivot whose sign is wrong or whose magnitude falls below `eps` is
/// replaced by sign·delta, which keeps the factorization well defined for the
/// regularized KKT systems of the interior-point method.
class SparseLdl {
 public:
  using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  /// `upper` holds the upper triangle, diagonal included.
  void analyze(const SpMat& upper);

  /// Factorizes upper + diag(signs)·static_reg. Returns the number of pivots
  /// that were dynamically regularized.
  int factorize(const SpMat& upper, const Eigen::VectorXd& signs, double static_reg,
                double eps, double delta);

  /// Solves with the factorized (regularized) matrix.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  Eigen::Index size() const { return n_; }
  Eigen::Index factor_nonzeros() const { return lp_.empty() ? 0 : lp_.back(); }

 private:
  Eigen::Index n_ = 0;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_;   // original -> factor
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv_;   // factor -> original
  SpMat permuted_;
  std::vector<int> parent_, lp_, lnz_, li_, flag_, pattern_;
  std::vector<double> lx_, d_, y_;
};

}  // namespace conecg::conic::detail
