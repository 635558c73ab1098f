#include "cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conecg::conic::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// u0² − ‖u1‖², computed as a product to limit cancellation.
double jnorm2(double u0, double u1norm) { return (u0 - u1norm) * (u0 + u1norm); }

// Smallest positive root of a·t² + b·t + c (c > 0), or +inf.
double first_positive_root(double a, double b, double c) {
  if (a == 0.0) return b < 0.0 ? -c / b : kInf;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q != 0.0 ? q / a : kInf;
  double r2 = q != 0.0 ? c / q : kInf;
  double best = kInf;
  if (r1 > 0.0) best = std::min(best, r1);
  if (r2 > 0.0) best = std::min(best, r2);
  return best;
}

}  // namespace

int ConeSpec::dim() const {
  int d = nonneg;
  for (int q : soc) d += q;
  return d;
}

bool compute_scaling(const ConeSpec& k, const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                     NtScaling& w) {
  const int l = k.nonneg;
  w.lin.resize(l);
  w.lambda.resize(s.size());
  for (int i = 0; i < l; ++i) {
    if (!(s[i] > 0.0) || !(z[i] > 0.0)) return false;
    w.lin[i] = std::sqrt(s[i] / z[i]);
    w.lambda[i] = std::sqrt(s[i] * z[i]);
  }
  w.beta.resize(k.soc.size());
  w.wbar.resize(k.soc.size());
  int off = l;
  for (std::size_t c = 0; c < k.soc.size(); ++c) {
    const int q = k.soc[c];
    const auto sc = s.segment(off, q);
    const auto zc = z.segment(off, q);
    const double sres = jnorm2(sc[0], sc.tail(q - 1).norm());
    const double zres = jnorm2(zc[0], zc.tail(q - 1).norm());
    if (!(sc[0] > 0.0) || !(zc[0] > 0.0) || !(sres > 0.0) || !(zres > 0.0)) return false;
    const Eigen::VectorXd sbar = sc / std::sqrt(sres);
    const Eigen::VectorXd zbar = zc / std::sqrt(zres);
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    Eigen::VectorXd wb(q);
    wb[0] = (sbar[0] + zbar[0]) / (2.0 * gamma);
    wb.tail(q - 1) = (sbar.tail(q - 1) - zbar.tail(q - 1)) / (2.0 * gamma);
    w.wbar[c] = wb;
    w.beta[c] = std::pow(sres / zres, 0.25);
    off += q;
  }
  w.lambda.tail(s.size() - l) = apply_w(k, w, z).tail(s.size() - l);
  return true;
}

Eigen::VectorXd apply_w(const ConeSpec& k, const NtScaling& w, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  const int l = k.nonneg;
  out.head(l) = w.lin.cwiseProduct(v.head(l));
  int off = l;
  for (std::size_t c = 0; c < k.soc.size(); ++c) {
    const int q = k.soc[c];
    const auto& wb = w.wbar[c];
    const double w0 = wb[0];
    const auto w1 = wb.tail(q - 1);
    const auto v0 = v[off];
    const auto v1 = v.segment(off + 1, q - 1);
    const double w1v1 = w1.dot(v1);
    out[off] = w.beta[c] * (w0 * v0 + w1v1);
    out.segment(off + 1, q - 1) = w.beta[c] * (v0 * w1 + v1 + (w1v1 / (1.0 + w0)) * w1);
    off += q;
  }
  return out;
}

Eigen::VectorXd apply_winv(const ConeSpec& k, const NtScaling& w, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  const int l = k.nonneg;
  out.head(l) = v.head(l).cwiseQuotient(w.lin);
  int off = l;
  for (std::size_t c = 0; c < k.soc.size(); ++c) {
    const int q = k.soc[c];
    const auto& wb = w.wbar[c];
    const double w0 = wb[0];
    const auto w1 = wb.tail(q - 1);
    const auto v0 = v[off];
    const auto v1 = v.segment(off + 1, q - 1);
    const double w1v1 = w1.dot(v1);
    out[off] = (w0 * v0 - w1v1) / w.beta[c];
    out.segment(off + 1, q - 1) = (-v0 * w1 + v1 + (w1v1 / (1.0 + w0)) * w1) / w.beta[c];
    off += q;
  }
  return out;
}

Eigen::MatrixXd soc_w2(const NtScaling& w, int cone) {
  const auto& wb = w.wbar[cone];
  const auto q = wb.size();
  Eigen::MatrixXd wm(q, q);
  wm(0, 0) = wb[0];
  wm.row(0).tail(q - 1) = wb.tail(q - 1).transpose();
  wm.col(0).tail(q - 1) = wb.tail(q - 1);
  wm.bottomRightCorner(q - 1, q - 1) =
      Eigen::MatrixXd::Identity(q - 1, q - 1) +
      wb.tail(q - 1) * wb.tail(q - 1).transpose() / (1.0 + wb[0]);
  const double b = w.beta[cone];
  return (b * b) * (wm * wm);
}

Eigen::VectorXd cone_product(const ConeSpec& k, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size());
  const int l = k.nonneg;
  out.head(l) = u.head(l).cwiseProduct(v.head(l));
  int off = l;
  for (int q : k.soc) {
    out[off] = u.segment(off, q).dot(v.segment(off, q));
    out.segment(off + 1, q - 1) =
        u[off] * v.segment(off + 1, q - 1) + v[off] * u.segment(off + 1, q - 1);
    off += q;
  }
  return out;
}

Eigen::VectorXd cone_division(const ConeSpec& k, const Eigen::VectorXd& lambda,
                              const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  const int l = k.nonneg;
  out.head(l) = v.head(l).cwiseQuotient(lambda.head(l));
  int off = l;
  for (int q : k.soc) {
    const double l0 = lambda[off];
    const auto l1 = lambda.segment(off + 1, q - 1);
    const double rho = jnorm2(l0, l1.norm());
    const double x0 = (l0 * v[off] - l1.dot(v.segment(off + 1, q - 1))) / rho;
    out[off] = x0;
    out.segment(off + 1, q - 1) = (v.segment(off + 1, q - 1) - x0 * l1) / l0;
    off += q;
  }
  return out;
}

Eigen::VectorXd identity_element(const ConeSpec& k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k.dim());
  e.head(k.nonneg).setOnes();
  int off = k.nonneg;
  for (int q : k.soc) {
    e[off] = 1.0;
    off += q;
  }
  return e;
}

double max_step(const ConeSpec& k, const Eigen::VectorXd& u, const Eigen::VectorXd& du) {
  double alpha = kInf;
  for (int i = 0; i < k.nonneg; ++i)
    if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
  int off = k.nonneg;
  for (int q : k.soc) {
    const double u0 = u[off], d0 = du[off];
    const auto u1 = u.segment(off + 1, q - 1);
    const auto d1 = du.segment(off + 1, q - 1);
    const double a = d0 * d0 - d1.squaredNorm();
    const double b = 2.0 * (u0 * d0 - u1.dot(d1));
    const double c = std::max(jnorm2(u0, u1.norm()), 0.0);
    alpha = std::min(alpha, first_positive_root(a, b, c));
    if (d0 < 0.0) alpha = std::min(alpha, -u0 / d0);
    off += q;
  }
  return alpha;
}

double min_cone_eigenvalue(const ConeSpec& k, const Eigen::VectorXd& u) {
  double m = kInf;
  for (int i = 0; i < k.nonneg; ++i) m = std::min(m, u[i]);
  int off = k.nonneg;
  for (int q : k.soc) {
    m = std::min(m, u[off] - u.segment(off + 1, q - 1).norm());
    off += q;
  }
  return m;
}

}  // namespace conecg::conic::detail
