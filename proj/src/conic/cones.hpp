#pragma once

#include <Eigen/Core>

#include <vector>

namespace conecg::conic::detail {

/// Product cone: a nonnegative orthant followed by second-order cones
/// {(u0, u1) : u0 ≥ ‖u1‖}.
struct ConeSpec {
  int nonneg = 0;
  std::vector<int> soc;

  int dim() const;
  int degree() const { return nonneg + static_cast<int>(soc.size()); }
};

/// Nesterov–Todd scaling W with W z = W⁻¹ s = λ. W is symmetric. On the
/// orthant W = diag(√(s/z)); on each SOC W = β·W̄ where
/// W̄ = [[w0, w1ᵀ], [w1, I + w1 w1ᵀ/(1 + w0)]] and w̄ᵀJw̄ = 1.
struct NtScaling {
  Eigen::VectorXd lin;
  std::vector<double> beta;
  std::vector<Eigen::VectorXd> wbar;
  Eigen::VectorXd lambda;
};

/// False when s or z is not in the interior.
bool compute_scaling(const ConeSpec& k, const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                     NtScaling& w);

Eigen::VectorXd apply_w(const ConeSpec& k, const NtScaling& w, const Eigen::VectorXd& v);
Eigen::VectorXd apply_winv(const ConeSpec& k, const NtScaling& w, const Eigen::VectorXd& v);
/// Dense W² for SOC number `cone`.
Eigen::MatrixXd soc_w2(const NtScaling& w, int cone);

/// Jordan product u∘v.
Eigen::VectorXd cone_product(const ConeSpec& k, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
/// x with λ∘x = v.
Eigen::VectorXd cone_division(const ConeSpec& k, const Eigen::VectorXd& lambda,
                              const Eigen::VectorXd& v);
Eigen::VectorXd identity_element(const ConeSpec& k);

/// Largest α ≥ 0 with u + α·du in the cone (infinity if unbounded).
double max_step(const ConeSpec& k, const Eigen::VectorXd& u, const Eigen::VectorXd& du);

/// Smallest Jordan eigenvalue of u over all blocks.
double min_cone_eigenvalue(const ConeSpec& k, const Eigen::VectorXd& u);

}  // namespace conecg::conic::detail
