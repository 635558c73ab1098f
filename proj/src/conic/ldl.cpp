#include "ldl.hpp"

#include <Eigen/OrderingMethods>

#include <cmath>

namespace conecg::conic::detail {

void SparseLdl::analyze(const SpMat& upper) {
  n_ = upper.rows();
  SpMat full = upper.selfadjointView<Eigen::Upper>();
  Eigen::AMDOrdering<int> amd;
  amd(full, pinv_);
  perm_ = pinv_.inverse();

  permuted_.resize(n_, n_);
  permuted_.selfadjointView<Eigen::Upper>() = upper.selfadjointView<Eigen::Upper>().twistedBy(perm_);
  permuted_.makeCompressed();

  const int n = static_cast<int>(n_);
  parent_.assign(n, -1);
  lnz_.assign(n, 0);
  flag_.assign(n, 0);
  lp_.assign(n + 1, 0);
  const int* ap = permuted_.outerIndexPtr();
  const int* ai = permuted_.innerIndexPtr();
  for (int k = 0; k < n; ++k) {
    parent_[k] = -1;
    flag_[k] = k;
    for (int p = ap[k]; p < ap[k + 1]; ++p) {
      int i = ai[p];
      if (i >= k) continue;
      for (; flag_[i] != k; i = parent_[i]) {
        if (parent_[i] == -1) parent_[i] = k;
        ++lnz_[i];
        flag_[i] = k;
      }
    }
  }
  for (int k = 0; k < n; ++k) lp_[k + 1] = lp_[k] + lnz_[k];
  li_.assign(lp_[n], 0);
  lx_.assign(lp_[n], 0.0);
  d_.assign(n, 0.0);
  y_.assign(n, 0.0);
  pattern_.assign(n, 0);
}

int SparseLdl::factorize(const SpMat& upper, const Eigen::VectorXd& signs, double static_reg,
                         double eps, double delta) {
  permuted_.selfadjointView<Eigen::Upper>() = upper.selfadjointView<Eigen::Upper>().twistedBy(perm_);
  const int n = static_cast<int>(n_);
  std::vector<double> sgn(n);
  for (int i = 0; i < n; ++i) sgn[perm_.indices()[i]] = signs[i];

  const int* ap = permuted_.outerIndexPtr();
  const int* ai = permuted_.innerIndexPtr();
  const double* ax = permuted_.valuePtr();
  int regularized = 0;
  for (int k = 0; k < n; ++k) {
    y_[k] = 0.0;
    int top = n;
    flag_[k] = k;
    lnz_[k] = 0;
    for (int p = ap[k]; p < ap[k + 1]; ++p) {
      int i = ai[p];
      if (i > k) continue;
      y_[i] += ax[p];
      int len = 0;
      for (; flag_[i] != k; i = parent_[i]) {
        pattern_[len++] = i;
        flag_[i] = k;
      }
      while (len > 0) pattern_[--top] = pattern_[--len];
    }
    double dk = y_[k] + sgn[k] * static_reg;
    y_[k] = 0.0;
    for (; top < n; ++top) {
      const int i = pattern_[top];
      const double yi = y_[i];
      y_[i] = 0.0;
      const int p2 = lp_[i] + lnz_[i];
      for (int p = lp_[i]; p < p2; ++p) y_[li_[p]] -= lx_[p] * yi;
      const double lki = yi / d_[i];
      dk -= lki * yi;
      li_[p2] = k;
      lx_[p2] = lki;
      ++lnz_[i];
    }
    if (sgn[k] * dk <= eps) {
      dk = sgn[k] * delta;
      ++regularized;
    }
    d_[k] = dk;
  }
  return regularized;
}

Eigen::VectorXd SparseLdl::solve(const Eigen::VectorXd& rhs) const {
  const int n = static_cast<int>(n_);
  Eigen::VectorXd x = perm_ * rhs;
  for (int j = 0; j < n; ++j) {
    const double xj = x[j];
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) x[li_[p]] -= lx_[p] * xj;
  }
  for (int j = 0; j < n; ++j) x[j] /= d_[j];
  for (int j = n - 1; j >= 0; --j) {
    double xj = x[j];
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) xj -= lx_[p] * x[li_[p]];
    x[j] = xj;
  }
  return pinv_ * x;
}

}  // namespace conecg::conic::detail
